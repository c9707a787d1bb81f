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

#ifndef MTM_ACCEPTANCE_HPP
#define MTM_ACCEPTANCE_HPP

/// \file
/// Acceptance probabilities for multiple-try moves.
///
/// Notation used throughout: x is the current state, y the selected
/// candidate (drawn by proposal k), and
///
///   forward  = p(x) pi_k(y|x),    backward = p(y) pi_k(x|y),
///   R(x, y)  = backward / forward.
///
/// A beta rule satisfies forward * beta(x,y) = backward * beta(y,x); a gamma
/// rule satisfies W_y gamma(W_x, W_y) = W_x gamma(W_y, W_x). Their product
/// is a valid multiple-try acceptance probability. The "generalized" form is
/// min[1, R W_x / W_y]; the "noref" form additionally carries the ratio of
/// the non-selected candidates' proposal densities under y and under x.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtm/core.hpp"
#include "mtm/models.hpp"

namespace mtm {

enum class BetaKind {
  beta1_min_ratio,        // min(1, R)
  beta2_barker,           // backward / (forward + backward)
  beta3_hastings_lambda,  // lambda / (1 + 1/R)
  beta4_lambda_denom,     // backward / lambda
  beta5_lambda_numer,     // lambda / forward
  beta6,                  // p(y) lambda / pi_k(y|x)
  beta7,                  // pi_k(x|y) lambda / p(x)
  general_F,              // F(R) with F(t) = t F(1/t)
};

/// F: R+ -> [0, 1], evaluated from log t.
using AcceptanceF = std::function<double(double log_theta)>;

/// F(t) = min(1, t).
double f_min_ratio(double log_theta) noexcept;
/// F(t) = t / (1 + t).
double f_barker(double log_theta) noexcept;

class BetaRule {
 public:
  static BetaRule min_ratio();
  static BetaRule barker();
  /// lambda defaults to 1, which turns beta3 into Barker's rule.
  static BetaRule hastings(LogLambda log_lambda = {});
  /// beta4..beta7 have no safe default lambda and require one.
  static BetaRule lambda_rule(BetaKind kind, LogLambda log_lambda);
  static BetaRule general(AcceptanceF f, std::string label = "general_F");

  /// "beta1".."beta7" or the F label.
  [[nodiscard]] std::string id() const;
  [[nodiscard]] BetaKind kind() const noexcept { return kind_; }

  /// beta from precomputed log forward/backward terms. x, y are only used
  /// for lambda. Throws InvalidAcceptance when the value leaves [0, 1 + 1e-9]
  /// or lambda is asymmetric on (x, y).
  [[nodiscard]] double evaluate(Point x, Point y, double log_p_x, double log_p_y, double log_q_forward,
                                double log_q_backward) const;

 private:
  BetaRule(BetaKind kind, LogLambda log_lambda, AcceptanceF f, std::string label);

  [[nodiscard]] double log_lambda_checked(Point x, Point y) const;

  BetaKind kind_;
  LogLambda log_lambda_;
  AcceptanceF f_;
  std::string label_;
};

/// Looks up "beta1".."beta7" (lambda used for beta3..beta7).
BetaRule beta_from_id(const std::string& id, LogLambda log_lambda = {});
std::vector<std::string> beta_ids();

enum class GammaKind {
  gamma1_Wx,           // W_x
  gamma2_barker_like,  // W_x / (W_x + W_y)
  gamma3_min_ratio,    // min(1, W_x / W_y)
};

class GammaRule {
 public:
  explicit GammaRule(GammaKind kind) : kind_{kind} {}

  [[nodiscard]] GammaKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string id() const;

  /// log gamma from log W_x, log W_y (log W_y > -inf).
  [[nodiscard]] double log_evaluate(double log_w_x, double log_w_y) const;

 private:
  GammaKind kind_;
};

GammaRule gamma_from_id(const std::string& id);
std::vector<std::string> gamma_ids();

enum class AcceptanceForm { generalized, composed, noref };

class AcceptanceRule {
 public:
  static AcceptanceRule generalized();
  static AcceptanceRule noref();
  static AcceptanceRule composed(BetaRule beta, GammaRule gamma);

  [[nodiscard]] AcceptanceForm form() const noexcept { return form_; }
  [[nodiscard]] const BetaRule& beta() const;
  [[nodiscard]] const GammaRule& gamma() const;
  /// "generalized", "noref" or "<beta>*<gamma>".
  [[nodiscard]] std::string id() const;

 private:
  AcceptanceRule(AcceptanceForm form, std::optional<BetaRule> beta, std::optional<GammaRule> gamma);

  AcceptanceForm form_;
  std::optional<BetaRule> beta_;
  std::optional<GammaRule> gamma_;
};

/// beta(x, y) for the move proposed by prop_k. p(x) must be positive.
double eval_beta(const BetaRule& rule, Point x, Point y, const TargetDensity& target,
                 const ConditionalProposal& prop_k);

/// gamma(W_x, W_y) with W_x, W_y in [0, 1] and W_y > 0.
double eval_gamma(const GammaRule& rule, double w_x, double w_y);

/// log of min[1, R(x,y) W_x / W_y]. -inf when p(y) = 0 or W_x = 0.
double log_alpha_generalized(Point x, Point y, double log_w_x, double log_w_y, const TargetDensity& target,
                             const ConditionalProposal& prop_k);

/// min[1, R(x,y) W_x / W_y].
double alpha_generalized(Point x, Point y, double w_x, double w_y, const TargetDensity& target,
                         const ConditionalProposal& prop_k);

/// log of the acceptance probability without reference points:
/// min[1, R(x,y) prod_{i!=k} pi_i(y_i|y) / prod_{i!=k} pi_i(y_i|x) W_x / W_y].
/// candidates[k] must be y.
double log_alpha_noref(Point x, std::size_t k, const PointSet& candidates, double log_w_x, double log_w_y,
                       const TargetDensity& target,
                       std::span<const ConditionalProposal* const> proposals);

double alpha_noref(Point x, std::size_t k, const PointSet& candidates, double w_x, double w_y,
                   const TargetDensity& target, std::span<const ConditionalProposal* const> proposals);

}  // namespace mtm

#endif  // MTM_ACCEPTANCE_HPP
