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

#ifndef MTM_DIAGNOSTICS_HPP
#define MTM_DIAGNOSTICS_HPP

/// \file
/// Chain statistics. Undefined statistics are reported as std::nullopt,
/// never as a sentinel number.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtm/sampler.hpp"

namespace mtm {

/// Fraction of accepted steps.
double acceptance_rate(const ChainTrace& trace);

/// Pearson correlation of the pairs (x_t, x_{t+1}) over the whole trace for
/// one coordinate. nullopt when either side of the pairs has zero variance.
std::optional<double> lag1_correlation(const ChainTrace& trace, std::size_t coordinate);

/// Same statistic for a plain scalar series.
std::optional<double> lag1_correlation(std::span<const double> series);

using ModeFn = std::function<std::size_t(Point)>;

/// Fraction of consecutive state pairs attributed to different modes.
double mode_jump_rate(const ChainTrace& trace, const ModeFn& mode_of);

/// Reciprocal of the mean importance weight over every try of every step,
/// i.e. an estimate of the reciprocal normalizing constant when the records
/// come from importance weights with normalized proposals. nullopt when all
/// weights are zero.
std::optional<double> normconst_estimate(std::span<const StepRecord> records);

/// Fraction of steps whose selected candidate came from each proposal group.
/// group_sizes partition the N tries in order (e.g. {50, 50}).
std::vector<double> selection_rates(std::span<const StepRecord> records, std::span<const std::size_t> group_sizes);

/// Mean of the per-step acceptance probabilities.
double mean_alpha(std::span<const StepRecord> records);

struct RunSummary {
  double acceptance_rate = 0.0;
  std::vector<std::optional<double>> lag1_corr;
  std::optional<double> mode_jump_rate;
  std::optional<double> normconst;
  std::vector<double> selection_rates;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct NamedStatistic {
  std::string name;
  std::optional<MeanStd> value;  // nullopt: missing in at least one run
};

struct AggregateSummary {
  std::size_t replications = 0;
  std::vector<NamedStatistic> statistics;

  /// nullptr if there is no statistic with that name.
  [[nodiscard]] const NamedStatistic* find(const std::string& name) const;
};

/// Flattens a summary into named statistics: accept_rate, lag1_corr_<i>,
/// mode_jump_rate, normconst_recip, sel_rate_<g> (1-based suffixes). Absent
/// optional statistics keep their name with an empty value.
std::vector<std::pair<std::string, std::optional<double>>> named_statistics(const RunSummary& summary);

/// Per-statistic sample mean and standard deviation (n - 1 denominator,
/// 0 for a single run). A statistic missing from any run is missing in the
/// aggregate.
AggregateSummary aggregate(std::span<const RunSummary> summaries);

}  // namespace mtm

#endif  // MTM_DIAGNOSTICS_HPP
