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

#ifndef MTM_ORACLE_HPP
#define MTM_ORACLE_HPP

/// \file
/// Exact transition kernels of multiple-try samplers on small finite state
/// spaces, obtained by enumerating every candidate tuple, selection index and
/// reference tuple. Used to check detailed balance to rounding error.
///
/// States are abstract indices 0..M-1. When a finite model is fed to the
/// acceptance evaluators, state i is the one-dimensional point {i}.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mtm/acceptance.hpp"
#include "mtm/core.hpp"

namespace mtm {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxStates = 8;
inline constexpr std::size_t kOracleMaxTries = 3;

/// Row-major square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_{n}, v_(n * n, fill) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {v_.data() + i * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

struct FiniteModel {
  /// Unnormalized positive target masses, one per state.
  std::vector<double> target_mass;
  /// One conditional table per try: proposals[j](condition, candidate).
  std::vector<SquareMatrix> proposals;
  /// Positive selection weight omega_j(candidate, condition).
  std::function<double(std::size_t proposal, std::size_t candidate, std::size_t condition)> weight;
  AcceptanceRule acceptance = AcceptanceRule::generalized();

  [[nodiscard]] std::size_t states() const noexcept { return target_mass.size(); }
  [[nodiscard]] std::size_t tries() const noexcept { return proposals.size(); }

  /// Throws ContractViolation unless masses are positive and every proposal
  /// row sums to 1 within 1e-12.
  void validate() const;
};

struct KernelMatrix {
  /// K(x, y): probability of moving from x to y in one step.
  SquareMatrix transition;
  /// Probability mass of staying at x, accumulated explicitly during the
  /// enumeration (rejections plus selections of x itself). Independent of
  /// the diagonal, which is set as the complement of the off-diagonal row.
  std::vector<double> enumerated_stay;

  [[nodiscard]] std::size_t size() const noexcept { return transition.size(); }
  /// |sum of enumerated outcomes - 1| for row x.
  [[nodiscard]] double completeness_error(std::size_t x) const;
};

/// Everything an acceptance probability may depend on for one enumerated
/// outcome. references[k] == x and candidates[k] == y.
struct TransitionContext {
  const FiniteModel& model;
  std::size_t x;
  std::size_t y;
  std::size_t k;
  std::span<const std::size_t> candidates;
  std::span<const std::size_t> references;
  double w_x;
  double w_y;
};

using AcceptanceOverride = std::function<double(const TransitionContext&)>;

/// Enumerates the kernel of the sampler described by the model's acceptance
/// form: reference points are drawn for generalized and composed forms and
/// reused for noref. `override_alpha`, when set, replaces the acceptance
/// probability (used for deliberately broken kernels). Throws BudgetExceeded
/// beyond kOracleMaxStates states or kOracleMaxTries tries.
KernelMatrix exact_kernel(const FiniteModel& model, const AcceptanceOverride& override_alpha = {});

/// max over x != y of |p(x)K(x,y) - p(y)K(y,x)| / max(p(x)K(x,y), p(y)K(y,x), 1e-300).
double check_detailed_balance(const KernelMatrix& kernel, std::span<const double> target_mass);

/// max_y |sum_x pi(x) K(x,y) - pi(y)| with pi the normalized target mass.
double stationarity_error(const KernelMatrix& kernel, std::span<const double> target_mass);

enum class FiniteWeightStyle {
  random,      // independent positive random table per proposal
  importance,  // p(c) / pi_j(c | d)
};

struct RandomModelOptions {
  std::size_t states = 4;
  std::size_t tries = 2;
  bool heterogeneous = true;  // a different table for each try
  bool independent = false;   // every row of a table identical
  FiniteWeightStyle weights = FiniteWeightStyle::random;
};

FiniteModel random_finite_model(const RandomModelOptions& options, AcceptanceRule acceptance, RngStream& rng);

/// Adapters so the acceptance evaluators run unchanged on finite models.
class FiniteTarget final : public TargetDensity {
 public:
  explicit FiniteTarget(std::vector<double> mass);
  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] std::string name() const override { return "finite"; }

 protected:
  [[nodiscard]] double do_log_density(Point x) const override;

 private:
  std::vector<double> log_mass_;
};

class FiniteProposal final : public ConditionalProposal {
 public:
  explicit FiniteProposal(SquareMatrix table);
  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] bool is_independent() const override { return independent_; }
  [[nodiscard]] std::string name() const override { return "finite"; }

 protected:
  void do_sample(Point condition, RngStream& rng, std::span<double> out) const override;
  [[nodiscard]] double do_log_density(Point candidate, Point condition) const override;

 private:
  SquareMatrix table_;
  bool independent_;
};

/// Index encoded in a one-dimensional finite-model point.
std::size_t finite_index(Point p, std::size_t states);

}  // namespace mtm

#endif  // MTM_ORACLE_HPP
