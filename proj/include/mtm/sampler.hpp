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

#ifndef MTM_SAMPLER_HPP
#define MTM_SAMPLER_HPP

/// \file
/// Multiple-try Metropolis transitions and the chain runner.
///
/// One step from x with N proposals pi_1..pi_N:
///   1. draw y_j ~ pi_j(.|x), j = 1..N
///   2. weigh w_j = omega_j(y_j, x)
///   3. select k with probability w_k / sum w; W_y = that probability
///   4. reference points: x*_i ~ pi_i(.|y) (generalized, composed) or
///      x*_i = y_i (noref), for i != k; x*_k = x
///   5. W_x = omega_k(x, y) / sum_j omega_j(x*_j, y)
///   6. accept y with probability alpha
///
/// Randomness is consumed in a fixed order, which makes coupled comparisons
/// between samplers exact:
///   - N candidate draws, in proposal order;
///   - one uniform for the selection, only when N > 1 and some weight is
///     positive;
///   - N - 1 reference draws in proposal order, skipping k (reference-drawing
///     forms only, and only after a successful selection);
///   - one acceptance uniform, always.
/// A step accepts when that uniform is strictly below alpha. With N = 1 this
/// is exactly the textbook Metropolis-Hastings consumption: one candidate
/// draw followed by one uniform.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mtm/acceptance.hpp"
#include "mtm/core.hpp"

namespace mtm {

/// How much of each step the records keep. `full` stores every candidate,
/// reference point and raw weight, which costs O(N d) memory per step.
enum class RecordDetail { summary, full };

struct SamplerConfig {
  /// One proposal per try; N = proposals.size().
  std::vector<std::shared_ptr<const ConditionalProposal>> proposals;
  WeightFunction weight;
  AcceptanceRule acceptance;
  RecordDetail detail = RecordDetail::summary;

  [[nodiscard]] std::size_t tries() const noexcept { return proposals.size(); }
};

/// `count` copies of one proposal.
std::vector<std::shared_ptr<const ConditionalProposal>> repeat_proposal(
    const std::shared_ptr<const ConditionalProposal>& proposal, std::size_t count);

struct StepRecord {
  /// Index of the selected candidate; empty when every candidate weight was
  /// zero (the step is then a forced rejection).
  std::optional<std::size_t> selected;
  double log_w_y = kNegInf;
  double log_w_x = kNegInf;
  double alpha = 0.0;
  bool accepted = false;
  std::size_t tries = 0;
  /// log sum_j omega_j(y_j, x) over the candidate side.
  double log_candidate_weight_sum = kNegInf;
  /// The selected candidate (empty when nothing was selected).
  State proposed;

  // Populated only with RecordDetail::full.
  State current;
  PointSet candidates;
  PointSet references;
  std::vector<double> candidate_log_weights;
  std::vector<double> reference_log_weights;

  [[nodiscard]] double w_y() const;
  [[nodiscard]] double w_x() const;
};

struct ChainTrace {
  /// T + 1 states, starting with the initial state.
  PointSet states;
  /// T step records.
  std::vector<StepRecord> records;

  [[nodiscard]] std::size_t steps() const noexcept { return records.size(); }
};

struct Selection {
  std::size_t index;
  double w_y;
  double log_w_y;
};

/// Draws an index with probability proportional to exp(log_weights).
/// Returns nullopt, without consuming randomness, when all weights are zero.
/// A uniform is consumed only when there is more than one weight.
std::optional<Selection> select_candidate(std::span<const double> log_weights, RngStream& rng);

/// One step of the reference-drawing sampler (generalized or composed
/// acceptance). p(x) must be positive.
StepRecord mtm_step_generalized(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng);

/// One step of the sampler that reuses the non-selected candidates as
/// reference points. Requires the noref acceptance form.
StepRecord mtm_step_noref(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng);

/// Dispatches on cfg.acceptance.form().
StepRecord mtm_step(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng);

/// Runs `steps` transitions from `init` (p(init) > 0, steps >= 1).
ChainTrace run_chain(Point init, const SamplerConfig& cfg, const TargetDensity& target, std::size_t steps,
                     RngStream& rng);

}  // namespace mtm

#endif  // MTM_SAMPLER_HPP
