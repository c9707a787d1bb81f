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

#include "mtm/models.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mtm {

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double bimodal_logpdf(double x) noexcept {
  const double u = x * x - 4.0;
  return -u * u / 4.0;
}

double levy_logpdf(double x, double eta, double nu) noexcept {
  const double z = x - eta;
  if (!(z > 0.0)) {
    return kNegInf;
  }
  return -1.5 * std::log(z) - nu / (2.0 * z);
}

LevyDensity::LevyDensity(double eta, double nu) : eta_{eta}, nu_{nu} {
  if (!(eta >= 0.0) || !(nu > 0.0)) {
    throw ContractViolation("levy target requires eta >= 0 and nu > 0");
  }
}

std::string LevyDensity::name() const { return "levy(" + format_number(eta_) + "," + format_number(nu_) + ")"; }

std::string SmilingFace::name() const {
  return form_ == BananaForm::printed ? "smiling_face" : "smiling_face_transposed";
}

double SmilingFace::component_log_density(std::size_t i, Point x) const {
  if (x.size() != 2) {
    throw ContractViolation("smiling face is two-dimensional");
  }
  if (i < kBumps.size()) {
    const Bump& b = kBumps[i];
    const double d1 = (x[0] - b.mean1) / b.sd1;
    const double d2 = (x[1] - b.mean2) / b.sd2;
    return -0.5 * d1 * d1 - 0.5 * d2 * d2;
  }
  if (i == 3) {
    const double a = form_ == BananaForm::printed ? x[0] : x[1];
    const double b = form_ == BananaForm::printed ? x[1] : x[0];
    const double ridge = a - kBananaRho * b * b + 100.0 * kBananaRho;
    return -a * a / kBananaEta - 0.5 * ridge * ridge;
  }
  throw ContractViolation("smiling face has four components");
}

double SmilingFace::do_log_density(Point x) const {
  std::array<double, 4> parts{};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    parts[i] = component_log_density(i, x);
  }
  return std::log(0.25) + log_sum_exp(parts);
}

double smiling_face_logpdf(Point x) {
  static const SmilingFace face;
  return face.log_density(x);
}

std::size_t mode_index(const TargetDensity& target, Point x) {
  const std::size_t n = target.component_count();
  if (n == 0) {
    throw ContractViolation("mode attribution needs a target with components");
  }
  std::size_t best = 0;
  double best_value = target.component_log_density(0, x);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = target.component_log_density(i, x);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best + 1;
}

GaussianRandomWalk::GaussianRandomWalk(double sigma, std::size_t dimension)
    : sigma_{sigma},
      dim_{dimension},
      log_norm_{-0.5 * static_cast<double>(dimension) * std::log(2.0 * std::numbers::pi * sigma * sigma)},
      inv_two_var_{1.0 / (2.0 * sigma * sigma)} {
  if (!(sigma > 0.0) || dimension == 0) {
    throw ContractViolation("random walk needs sigma > 0 and dimension >= 1");
  }
}

std::string GaussianRandomWalk::name() const { return "rw_gauss(" + format_number(sigma_) + ")"; }

void GaussianRandomWalk::do_sample(Point condition, RngStream& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = condition[i] + sigma_ * rng.normal();
  }
}

double GaussianRandomWalk::do_log_density(Point candidate, Point condition) const {
  double sq = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double d = candidate[i] - condition[i];
    sq += d * d;
  }
  return log_norm_ - sq * inv_two_var_;
}

IndependentGaussian::IndependentGaussian(std::vector<double> mean, double sigma)
    : mean_{std::move(mean)},
      sigma_{sigma},
      log_norm_{-0.5 * static_cast<double>(mean_.size()) * std::log(2.0 * std::numbers::pi * sigma * sigma)},
      inv_two_var_{1.0 / (2.0 * sigma * sigma)} {
  if (!(sigma > 0.0) || mean_.empty()) {
    throw ContractViolation("independent gaussian needs sigma > 0 and a non-empty mean");
  }
}

std::string IndependentGaussian::name() const {
  std::string s = "ind_gauss(";
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    s += (i ? " " : "") + format_number(mean_[i]);
  }
  return s + "," + format_number(sigma_) + ")";
}

void IndependentGaussian::do_sample(Point /*condition*/, RngStream& rng, std::span<double> out) const {
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    out[i] = mean_[i] + sigma_ * rng.normal();
  }
}

double IndependentGaussian::do_log_density(Point candidate, Point /*condition*/) const {
  double sq = 0.0;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double d = candidate[i] - mean_[i];
    sq += d * d;
  }
  return log_norm_ - sq * inv_two_var_;
}

IndependentUniform::IndependentUniform(double lower, double upper) : lower_{lower}, upper_{upper} {
  if (!(upper > lower)) {
    throw ContractViolation("uniform proposal needs lower < upper");
  }
}

std::string IndependentUniform::name() const {
  return "ind_uniform(" + format_number(lower_) + "," + format_number(upper_) + ")";
}

void IndependentUniform::do_sample(Point /*condition*/, RngStream& rng, std::span<double> out) const {
  out[0] = lower_ + (upper_ - lower_) * rng.uniform();
}

double IndependentUniform::do_log_density(Point candidate, Point /*condition*/) const {
  if (candidate[0] < lower_ || candidate[0] > upper_) {
    return kNegInf;
  }
  return -std::log(upper_ - lower_);
}

namespace {

constexpr std::array<std::pair<WeightKind, const char*>, 11> kWeightIds{{
    {WeightKind::importance, "importance"},
    {WeightKind::target, "target"},
    {WeightKind::constant, "constant"},
    {WeightKind::sqrt_target, "sqrt_target"},
    {WeightKind::target_sq, "target_sq"},
    {WeightKind::target_cube, "target_cube"},
    {WeightKind::reverse_proposal, "reverse_proposal"},
    {WeightKind::inv_proposal, "inv_proposal"},
    {WeightKind::target_times_reverse, "target_times_reverse"},
    {WeightKind::lambda_form, "lambda_form"},
    {WeightKind::target_power, "target_power"},
}};

WeightFunction power_weight(std::string label, double theta) {
  if (!(theta > 0.0)) {
    throw ContractViolation("target power weight needs theta > 0");
  }
  return WeightFunction{std::move(label), [theta](const WeightArgs& a) {
                          return a.log_target == kNegInf ? kNegInf : theta * a.log_target;
                        }};
}

}  // namespace

std::string weight_id(WeightKind kind) {
  for (const auto& [k, id] : kWeightIds) {
    if (k == kind) {
      return id;
    }
  }
  throw std::invalid_argument("unknown weight kind");
}

std::vector<std::string> weight_ids() {
  std::vector<std::string> ids;
  for (const auto& entry : kWeightIds) {
    ids.emplace_back(entry.second);
  }
  return ids;
}

WeightKind weight_kind_from_id(const std::string& id) {
  for (const auto& [k, name] : kWeightIds) {
    if (id == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown weight id '" + id + "'");
}

WeightFunction make_weight(WeightKind kind, double theta, LogLambda log_lambda) {
  const std::string label = weight_id(kind);
  switch (kind) {
    case WeightKind::importance:
      return WeightFunction{label, [](const WeightArgs& a) {
                              if (a.log_target == kNegInf) {
                                return kNegInf;
                              }
                              return a.log_target - a.proposal.log_density(a.candidate, a.condition);
                            }};
    case WeightKind::target:
      return WeightFunction{label, [](const WeightArgs& a) { return a.log_target; }};
    case WeightKind::constant:
      return WeightFunction{label, [](const WeightArgs&) { return 0.0; }};
    case WeightKind::sqrt_target:
      return power_weight(label, 0.5);
    case WeightKind::target_sq:
      return power_weight(label, 2.0);
    case WeightKind::target_cube:
      return power_weight(label, 3.0);
    case WeightKind::target_power:
      return power_weight(label, theta);
    case WeightKind::reverse_proposal:
      return WeightFunction{label,
                            [](const WeightArgs& a) { return a.proposal.log_density(a.condition, a.candidate); }};
    case WeightKind::inv_proposal:
      return WeightFunction{label,
                            [](const WeightArgs& a) { return -a.proposal.log_density(a.candidate, a.condition); }};
    case WeightKind::target_times_reverse:
      return WeightFunction{label, [](const WeightArgs& a) {
                              if (a.log_target == kNegInf) {
                                return kNegInf;
                              }
                              return a.log_target + a.proposal.log_density(a.condition, a.candidate);
                            }};
    case WeightKind::lambda_form: {
      if (!log_lambda) {
        log_lambda = lambda_one();
      }
      return WeightFunction{label, [lam = std::move(log_lambda)](const WeightArgs& a) {
                              if (a.log_target == kNegInf) {
                                return kNegInf;
                              }
                              const double ll = lam(a.condition, a.candidate);
                              if (ll == kNegInf) {
                                return kNegInf;
                              }
                              return a.log_target + a.proposal.log_density(a.condition, a.candidate) + ll;
                            }};
    }
  }
  throw std::invalid_argument("unknown weight kind");
}

LogLambda lambda_one() {
  return [](Point, Point) { return 0.0; };
}

LogLambda lambda_gauss(double s) {
  if (!(s > 0.0)) {
    throw ContractViolation("lambda_gauss needs s > 0");
  }
  const double inv = 1.0 / (2.0 * s * s);
  return [inv](Point x, Point y) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      sq += d * d;
    }
    return -sq * inv;
  };
}

}  // namespace mtm
