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

#include "mtm/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtm {

namespace {

void require_finite(Point coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) {
      throw ContractViolation("state coordinates must be finite");
    }
  }
}

}  // namespace

State::State(std::vector<double> coordinates) : coords_{std::move(coordinates)} { require_finite(coords_); }

State::State(std::initializer_list<double> coordinates) : coords_(coordinates) { require_finite(coords_); }

State::State(Point coordinates) : coords_(coordinates.begin(), coordinates.end()) { require_finite(coords_); }

void PointSet::push_back(Point p) {
  if (dim_ == 0 && data_.empty()) {
    dim_ = p.size();
  }
  if (p.size() != dim_) {
    throw ContractViolation("point dimension does not match the set");
  }
  data_.insert(data_.end(), p.begin(), p.end());
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_{seed}, stream_id_{stream_id} {
  // seed_seq output is fully specified by the standard, so the engine state
  // depends only on (seed, stream_id).
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x6d746d31U};
  engine_.seed(seq);
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::normal() { return normal_(engine_); }

double TargetDensity::log_density(Point x) const {
  if (x.size() != dimension()) {
    throw ContractViolation("point dimension " + std::to_string(x.size()) + " does not match target dimension " +
                            std::to_string(dimension()));
  }
  return do_log_density(x);
}

double TargetDensity::component_log_density(std::size_t /*i*/, Point /*x*/) const {
  throw ContractViolation("target '" + name() + "' has no component decomposition");
}

void ConditionalProposal::sample(Point condition, RngStream& rng, std::span<double> out) const {
  if (condition.size() != dimension() || out.size() != dimension()) {
    throw ContractViolation("proposal dimension mismatch");
  }
  do_sample(condition, rng, out);
}

State ConditionalProposal::sample(Point condition, RngStream& rng) const {
  std::vector<double> out(dimension());
  sample(condition, rng, out);
  return State{std::move(out)};
}

double ConditionalProposal::log_density(Point candidate, Point condition) const {
  if (candidate.size() != dimension() || condition.size() != dimension()) {
    throw ContractViolation("proposal dimension mismatch");
  }
  return do_log_density(candidate, condition);
}

WeightFunction::WeightFunction(std::string label, LogWeightFn fn) : label_{std::move(label)}, fn_{std::move(fn)} {
  if (!fn_) {
    throw ContractViolation("weight function '" + label_ + "' is empty");
  }
}

double WeightFunction::log_weight(const WeightArgs& args) const {
  const double lw = fn_(args);
  if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
    throw InvalidWeight("weight '" + label_ + "' returned " + (std::isnan(lw) ? "NaN" : "+inf"));
  }
  return lw;
}

double log_weight_eval(const WeightFunction& w, const TargetDensity& target, const ConditionalProposal& proposal,
                       Point candidate, Point condition) {
  if (candidate.size() != target.dimension() || condition.size() != target.dimension()) {
    throw ContractViolation("weight arguments do not match the target dimension");
  }
  return w.log_weight({candidate, condition, target.log_density(candidate), proposal});
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) {
    return kNegInf;
  }
  const double m = *std::max_element(values.begin(), values.end());
  if (m == kNegInf) {
    return kNegInf;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

double log_add_exp(double a, double b) {
  if (a < b) {
    std::swap(a, b);
  }
  if (b == kNegInf) {
    return a;
  }
  return a + std::log1p(std::exp(b - a));
}

}  // namespace mtm
