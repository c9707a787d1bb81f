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

#include "mtm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mtm {

double acceptance_rate(const ChainTrace& trace) {
  if (trace.records.empty()) {
    throw ContractViolation("acceptance rate of an empty trace");
  }
  std::size_t accepted = 0;
  for (const auto& r : trace.records) {
    accepted += r.accepted ? 1 : 0;
  }
  return static_cast<double>(accepted) / static_cast<double>(trace.records.size());
}

std::optional<double> lag1_correlation(std::span<const double> series) {
  if (series.size() < 3) {
    throw ContractViolation("lag-1 correlation needs at least three values");
  }
  const std::size_t n = series.size() - 1;
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    mean_a += series[t];
    mean_b += series[t + 1];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double a = series[t] - mean_a;
    const double b = series[t + 1] - mean_b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  if (saa == 0.0 || sbb == 0.0) {
    return std::nullopt;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> lag1_correlation(const ChainTrace& trace, std::size_t coordinate) {
  if (coordinate >= trace.states.dimension()) {
    throw ContractViolation("coordinate index out of range");
  }
  std::vector<double> series(trace.states.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    series[t] = trace.states[t][coordinate];
  }
  return lag1_correlation(series);
}

double mode_jump_rate(const ChainTrace& trace, const ModeFn& mode_of) {
  if (trace.states.size() < 2) {
    throw ContractViolation("mode-jump rate needs at least two states");
  }
  std::size_t jumps = 0;
  std::size_t prev = mode_of(trace.states[0]);
  for (std::size_t t = 1; t < trace.states.size(); ++t) {
    const std::size_t cur = mode_of(trace.states[t]);
    jumps += cur != prev ? 1 : 0;
    prev = cur;
  }
  return static_cast<double>(jumps) / static_cast<double>(trace.states.size() - 1);
}

std::optional<double> normconst_estimate(std::span<const StepRecord> records) {
  std::vector<double> sums;
  sums.reserve(records.size());
  double tries = 0.0;
  for (const auto& r : records) {
    sums.push_back(r.log_candidate_weight_sum);
    tries += static_cast<double>(r.tries);
  }
  const double log_total = log_sum_exp(sums);
  if (log_total == kNegInf || tries == 0.0) {
    return std::nullopt;
  }
  // 1 / (total / tries)
  return std::exp(std::log(tries) - log_total);
}

std::vector<double> selection_rates(std::span<const StepRecord> records, std::span<const std::size_t> group_sizes) {
  std::vector<std::size_t> group_of;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    group_of.insert(group_of.end(), group_sizes[g], g);
  }
  std::vector<double> rates(group_sizes.size(), 0.0);
  if (records.empty()) {
    return rates;
  }
  for (const auto& r : records) {
    if (r.selected) {
      if (*r.selected >= group_of.size()) {
        throw ContractViolation("group sizes do not cover every try");
      }
      rates[group_of[*r.selected]] += 1.0;
    }
  }
  for (double& v : rates) {
    v /= static_cast<double>(records.size());
  }
  return rates;
}

double mean_alpha(std::span<const StepRecord> records) {
  if (records.empty()) {
    throw ContractViolation("mean alpha of an empty record list");
  }
  double s = 0.0;
  for (const auto& r : records) {
    s += r.alpha;
  }
  return s / static_cast<double>(records.size());
}

const NamedStatistic* AggregateSummary::find(const std::string& name) const {
  for (const auto& s : statistics) {
    if (s.name == name) {
      return &s;
    }
  }
  return nullptr;
}

std::vector<std::pair<std::string, std::optional<double>>> named_statistics(const RunSummary& summary) {
  std::vector<std::pair<std::string, std::optional<double>>> out;
  out.emplace_back("accept_rate", summary.acceptance_rate);
  for (std::size_t i = 0; i < summary.lag1_corr.size(); ++i) {
    out.emplace_back("lag1_corr_" + std::to_string(i + 1), summary.lag1_corr[i]);
  }
  out.emplace_back("mode_jump_rate", summary.mode_jump_rate);
  out.emplace_back("normconst_recip", summary.normconst);
  for (std::size_t g = 0; g < summary.selection_rates.size(); ++g) {
    out.emplace_back("sel_rate_" + std::to_string(g + 1), summary.selection_rates[g]);
  }
  return out;
}

AggregateSummary aggregate(std::span<const RunSummary> summaries) {
  if (summaries.empty()) {
    throw ContractViolation("cannot aggregate zero summaries");
  }
  const auto first = named_statistics(summaries.front());
  std::vector<std::vector<std::optional<double>>> columns(first.size());
  for (const auto& s : summaries) {
    const auto named = named_statistics(s);
    if (named.size() != first.size()) {
      throw ContractViolation("summaries carry inconsistent statistics");
    }
    for (std::size_t i = 0; i < named.size(); ++i) {
      if (named[i].first != first[i].first) {
        throw ContractViolation("summaries carry inconsistent statistics");
      }
      columns[i].push_back(named[i].second);
    }
  }

  AggregateSummary agg;
  agg.replications = summaries.size();
  for (std::size_t i = 0; i < first.size(); ++i) {
    NamedStatistic stat{first[i].first, std::nullopt};
    const auto& col = columns[i];
    const bool complete = std::all_of(col.begin(), col.end(), [](const auto& v) { return v.has_value(); });
    if (complete) {
      const double n = static_cast<double>(col.size());
      double mean = 0.0;
      for (const auto& v : col) {
        mean += *v;
      }
      mean /= n;
      double ss = 0.0;
      for (const auto& v : col) {
        ss += (*v - mean) * (*v - mean);
      }
      stat.value = MeanStd{mean, col.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
    }
    agg.statistics.push_back(std::move(stat));
  }
  return agg;
}

}  // namespace mtm
