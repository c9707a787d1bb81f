// Copyright 2026 The mtm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtm/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mtm {

namespace {

constexpr double kBetaSlack = 1e-9;
constexpr double kLambdaSymmetryTol = 1e-12;

double checked_log_target(const TargetDensity& target, Point x) {
  const double lp = target.log_density(x);
  if (lp == kNegInf) {
    throw ContractViolation("current state has zero target density");
  }
  return lp;
}

double checked_forward(const ConditionalProposal& prop, Point y, Point x) {
  const double lq = prop.log_density(y, x);
  if (lq == kNegInf) {
    throw ContractViolation("candidate has zero density under its own proposal");
  }
  return lq;
}

void check_log_selection(double log_w_x, double log_w_y) {
  if (std::isnan(log_w_x) || std::isnan(log_w_y) || log_w_x > 1e-12 || log_w_y > 1e-12) {
    throw ContractViolation("selection probabilities must lie in [0, 1]");
  }
  if (log_w_y == kNegInf) {
    throw ContractViolation("selected candidate must have positive selection probability");
  }
}

// log R(x, y), or nullopt when p(y) = 0.
std::optional<double> log_mh_ratio(Point x, Point y, const TargetDensity& target,
                                   const ConditionalProposal& prop_k) {
  const double lp_x = checked_log_target(target, x);
  const double lp_y = target.log_density(y);
  if (lp_y == kNegInf) {
    return std::nullopt;
  }
  const double lq_f = checked_forward(prop_k, y, x);
  const double lq_b = prop_k.log_density(x, y);
  return (lp_y + lq_b) - (lp_x + lq_f);
}

double log_prob_from_linear(double w, const char* what) {
  if (!(w >= 0.0 && w <= 1.0 + 1e-12)) {
    throw ContractViolation(std::string(what) + " must lie in [0, 1]");
  }
  return w == 0.0 ? kNegInf : std::log(std::min(w, 1.0));
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    out += (out.empty() ? "" : ", ") + id;
  }
  return out;
}

}  // namespace

double f_min_ratio(double log_theta) noexcept { return log_theta >= 0.0 ? 1.0 : std::exp(log_theta); }

double f_barker(double log_theta) noexcept {
  if (log_theta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-log_theta));
  }
  const double e = std::exp(log_theta);
  return e / (1.0 + e);
}

BetaRule::BetaRule(BetaKind kind, LogLambda log_lambda, AcceptanceF f, std::string label)
    : kind_{kind}, log_lambda_{std::move(log_lambda)}, f_{std::move(f)}, label_{std::move(label)} {}

BetaRule BetaRule::min_ratio() { return {BetaKind::beta1_min_ratio, {}, {}, "beta1"}; }

BetaRule BetaRule::barker() { return {BetaKind::beta2_barker, {}, {}, "beta2"}; }

BetaRule BetaRule::hastings(LogLambda log_lambda) {
  if (!log_lambda) {
    log_lambda = lambda_one();
  }
  return {BetaKind::beta3_hastings_lambda, std::move(log_lambda), {}, "beta3"};
}

BetaRule BetaRule::lambda_rule(BetaKind kind, LogLambda log_lambda) {
  const char* label = nullptr;
  switch (kind) {
    case BetaKind::beta3_hastings_lambda:
      return hastings(std::move(log_lambda));
    case BetaKind::beta4_lambda_denom:
      label = "beta4";
      break;
    case BetaKind::beta5_lambda_numer:
      label = "beta5";
      break;
    case BetaKind::beta6:
      label = "beta6";
      break;
    case BetaKind::beta7:
      label = "beta7";
      break;
    default:
      throw ContractViolation("lambda_rule only builds beta3..beta7");
  }
  if (!log_lambda) {
    throw ContractViolation(std::string(label) + " requires a user-supplied lambda");
  }
  return {kind, std::move(log_lambda), {}, label};
}

BetaRule BetaRule::general(AcceptanceF f, std::string label) {
  if (!f) {
    throw ContractViolation("general beta needs an F function");
  }
  return {BetaKind::general_F, {}, std::move(f), std::move(label)};
}

std::string BetaRule::id() const { return label_; }

double BetaRule::log_lambda_checked(Point x, Point y) const {
  const double xy = log_lambda_(x, y);
  const double yx = log_lambda_(y, x);
  if (std::isnan(xy) || std::isnan(yx) || xy == std::numeric_limits<double>::infinity()) {
    throw InvalidAcceptance(label_ + ": lambda must be finite and non-negative");
  }
  if (!(xy == yx || std::abs(xy - yx) <= kLambdaSymmetryTol)) {
    throw InvalidAcceptance(label_ + ": lambda is not symmetric");
  }
  return xy;
}

double BetaRule::evaluate(Point x, Point y, double log_p_x, double log_p_y, double log_q_forward,
                          double log_q_backward) const {
  if (log_p_x == kNegInf) {
    throw ContractViolation("current state has zero target density");
  }
  if (log_p_y == kNegInf) {
    return 0.0;
  }
  if (log_q_forward == kNegInf) {
    throw ContractViolation("candidate has zero density under its own proposal");
  }
  const double log_fwd = log_p_x + log_q_forward;
  const double log_bwd = log_p_y + log_q_backward;
  const double log_r = log_bwd - log_fwd;

  double value = 0.0;
  switch (kind_) {
    case BetaKind::beta1_min_ratio:
      value = f_min_ratio(log_r);
      break;
    case BetaKind::beta2_barker:
      value = f_barker(log_r);
      break;
    case BetaKind::beta3_hastings_lambda:
      value = std::exp(log_lambda_checked(x, y)) * f_barker(log_r);
      break;
    case BetaKind::beta4_lambda_denom:
      value = std::exp(log_bwd - log_lambda_checked(x, y));
      break;
    case BetaKind::beta5_lambda_numer:
      value = std::exp(log_lambda_checked(x, y) - log_fwd);
      break;
    case BetaKind::beta6:
      value = std::exp(log_p_y + log_lambda_checked(x, y) - log_q_forward);
      break;
    case BetaKind::beta7:
      value = std::exp(log_q_backward + log_lambda_checked(x, y) - log_p_x);
      break;
    case BetaKind::general_F:
      value = f_(log_r);
      break;
  }
  if (std::isnan(value) || value < 0.0 || value > 1.0 + kBetaSlack) {
    throw InvalidAcceptance(label_ + " evaluated outside [0, 1]: " + std::to_string(value));
  }
  return std::min(value, 1.0);
}

BetaRule beta_from_id(const std::string& id, LogLambda log_lambda) {
  if (id == "beta1") return BetaRule::min_ratio();
  if (id == "beta2") return BetaRule::barker();
  if (id == "beta3") return BetaRule::hastings(std::move(log_lambda));
  if (id == "beta4") return BetaRule::lambda_rule(BetaKind::beta4_lambda_denom, std::move(log_lambda));
  if (id == "beta5") return BetaRule::lambda_rule(BetaKind::beta5_lambda_numer, std::move(log_lambda));
  if (id == "beta6") return BetaRule::lambda_rule(BetaKind::beta6, std::move(log_lambda));
  if (id == "beta7") return BetaRule::lambda_rule(BetaKind::beta7, std::move(log_lambda));
  throw std::invalid_argument("unknown beta id '" + id + "', expected one of: " + join_ids(beta_ids()));
}

std::vector<std::string> beta_ids() { return {"beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta7"}; }

std::string GammaRule::id() const {
  switch (kind_) {
    case GammaKind::gamma1_Wx:
      return "gamma1";
    case GammaKind::gamma2_barker_like:
      return "gamma2";
    case GammaKind::gamma3_min_ratio:
      return "gamma3";
  }
  return "gamma?";
}

double GammaRule::log_evaluate(double log_w_x, double log_w_y) const {
  switch (kind_) {
    case GammaKind::gamma1_Wx:
      return log_w_x;
    case GammaKind::gamma2_barker_like:
      return log_w_x == kNegInf ? kNegInf : log_w_x - log_add_exp(log_w_x, log_w_y);
    case GammaKind::gamma3_min_ratio:
      return std::min(0.0, log_w_x - log_w_y);
  }
  return kNegInf;
}

GammaRule gamma_from_id(const std::string& id) {
  if (id == "gamma1") return GammaRule{GammaKind::gamma1_Wx};
  if (id == "gamma2") return GammaRule{GammaKind::gamma2_barker_like};
  if (id == "gamma3") return GammaRule{GammaKind::gamma3_min_ratio};
  throw std::invalid_argument("unknown gamma id '" + id + "', expected one of: " + join_ids(gamma_ids()));
}

std::vector<std::string> gamma_ids() { return {"gamma1", "gamma2", "gamma3"}; }

AcceptanceRule::AcceptanceRule(AcceptanceForm form, std::optional<BetaRule> beta, std::optional<GammaRule> gamma)
    : form_{form}, beta_{std::move(beta)}, gamma_{gamma} {}

AcceptanceRule AcceptanceRule::generalized() { return {AcceptanceForm::generalized, std::nullopt, std::nullopt}; }

AcceptanceRule AcceptanceRule::noref() { return {AcceptanceForm::noref, std::nullopt, std::nullopt}; }

AcceptanceRule AcceptanceRule::composed(BetaRule beta, GammaRule gamma) {
  return {AcceptanceForm::composed, std::move(beta), gamma};
}

const BetaRule& AcceptanceRule::beta() const {
  if (!beta_) {
    throw ContractViolation("acceptance rule '" + id() + "' has no beta factor");
  }
  return *beta_;
}

const GammaRule& AcceptanceRule::gamma() const {
  if (!gamma_) {
    throw ContractViolation("acceptance rule '" + id() + "' has no gamma factor");
  }
  return *gamma_;
}

std::string AcceptanceRule::id() const {
  switch (form_) {
    case AcceptanceForm::generalized:
      return "generalized";
    case AcceptanceForm::noref:
      return "noref";
    case AcceptanceForm::composed:
      return beta_->id() + "*" + gamma_->id();
  }
  return "?";
}

double eval_beta(const BetaRule& rule, Point x, Point y, const TargetDensity& target,
                 const ConditionalProposal& prop_k) {
  const double lp_x = checked_log_target(target, x);
  const double lp_y = target.log_density(y);
  if (lp_y == kNegInf) {
    return 0.0;
  }
  return rule.evaluate(x, y, lp_x, lp_y, prop_k.log_density(y, x), prop_k.log_density(x, y));
}

double eval_gamma(const GammaRule& rule, double w_x, double w_y) {
  if (!(w_x >= 0.0 && w_x <= 1.0) || !(w_y >= 0.0 && w_y <= 1.0)) {
    throw ContractViolation("selection probabilities must lie in [0, 1]");
  }
  if (w_y == 0.0) {
    throw ContractViolation("gamma requires W_y > 0");
  }
  switch (rule.kind()) {
    case GammaKind::gamma1_Wx:
      return w_x;
    case GammaKind::gamma2_barker_like:
      return w_x / (w_x + w_y);
    case GammaKind::gamma3_min_ratio:
      return std::min(1.0, w_x / w_y);
  }
  return 0.0;
}

double log_alpha_generalized(Point x, Point y, double log_w_x, double log_w_y, const TargetDensity& target,
                             const ConditionalProposal& prop_k) {
  check_log_selection(log_w_x, log_w_y);
  const auto log_r = log_mh_ratio(x, y, target, prop_k);
  if (!log_r || log_w_x == kNegInf) {
    return kNegInf;
  }
  return std::min(0.0, *log_r + log_w_x - log_w_y);
}

double alpha_generalized(Point x, Point y, double w_x, double w_y, const TargetDensity& target,
                         const ConditionalProposal& prop_k) {
  return std::exp(log_alpha_generalized(x, y, log_prob_from_linear(w_x, "W_x"), log_prob_from_linear(w_y, "W_y"),
                                        target, prop_k));
}

double log_alpha_noref(Point x, std::size_t k, const PointSet& candidates, double log_w_x, double log_w_y,
                       const TargetDensity& target, std::span<const ConditionalProposal* const> proposals) {
  if (candidates.size() != proposals.size() || k >= candidates.size()) {
    throw ContractViolation("noref acceptance needs one candidate per proposal and a valid index");
  }
  check_log_selection(log_w_x, log_w_y);
  const Point y = candidates[k];
  const auto log_r = log_mh_ratio(x, y, target, *proposals[k]);
  if (!log_r || log_w_x == kNegInf) {
    return kNegInf;
  }
  double others = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i == k) {
      continue;
    }
    const double under_y = proposals[i]->log_density(candidates[i], y);
    const double under_x = checked_forward(*proposals[i], candidates[i], x);
    others += under_y - under_x;
  }
  if (others == kNegInf) {
    return kNegInf;
  }
  return std::min(0.0, (*log_r + others) + log_w_x - log_w_y);
}

double alpha_noref(Point x, std::size_t k, const PointSet& candidates, double w_x, double w_y,
                   const TargetDensity& target, std::span<const ConditionalProposal* const> proposals) {
  return std::exp(log_alpha_noref(x, k, candidates, log_prob_from_linear(w_x, "W_x"),
                                  log_prob_from_linear(w_y, "W_y"), target, proposals));
}

}  // namespace mtm
