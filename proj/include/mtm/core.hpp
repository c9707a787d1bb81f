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

#ifndef MTM_CORE_HPP
#define MTM_CORE_HPP

/// \file
/// States, target densities, conditional proposals, weight functions and the
/// per-chain random stream. Everything downstream (samplers, oracle, harness)
/// is written against these abstractions.
///
/// All densities and weights live in log-space. A log value of -inf encodes
/// an exact zero (outside the support).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtm {

/// Non-owning view of a point's coordinates.
using Point = std::span<const double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A precondition of a public operation was not met.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A weight function produced NaN or +inf.
class InvalidWeight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An acceptance building block left [0, 1] or broke a required symmetry.
class InvalidAcceptance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owned point of the state space. Coordinates are always finite.
class State {
 public:
  State() = default;
  explicit State(std::vector<double> coordinates);
  State(std::initializer_list<double> coordinates);
  explicit State(Point coordinates);

  [[nodiscard]] std::size_t dimension() const noexcept { return coords_.size(); }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }
  [[nodiscard]] Point view() const noexcept { return coords_; }
  [[nodiscard]] const std::vector<double>& coordinates() const noexcept { return coords_; }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }

  // NOLINTNEXTLINE(google-explicit-constructor)
  operator Point() const noexcept { return coords_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::vector<double> coords_;
};

/// Fixed-dimension list of points stored contiguously.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dimension, std::size_t count) : dim_{dimension}, data_(dimension * count) {}

  [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] Point operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  [[nodiscard]] std::span<double> mutable_at(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  void push_back(Point p);
  void reserve(std::size_t count) { data_.reserve(count * dim_); }
  /// Changes the shape; existing values are unspecified afterwards.
  void reshape(std::size_t dimension, std::size_t count) {
    dim_ = dimension;
    data_.resize(dimension * count);
  }

  [[nodiscard]] const std::vector<double>& raw() const noexcept { return data_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Random source owned by exactly one chain. Identical (seed, stream_id)
/// pairs always produce identical sequences within one build.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal.
  double normal();

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Unnormalized target density p(x), evaluated as log p(x).
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;

  [[nodiscard]] virtual std::size_t dimension() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;

  /// log p(x); -inf exactly where p(x) = 0. Throws ContractViolation on a
  /// dimension mismatch.
  [[nodiscard]] double log_density(Point x) const;

  /// Number of mixture components used for mode attribution (0 if none).
  [[nodiscard]] virtual std::size_t component_count() const { return 0; }
  [[nodiscard]] virtual double component_log_density(std::size_t i, Point x) const;

  /// False for targets whose moments do not exist; correlation statistics
  /// are meaningless there.
  [[nodiscard]] virtual bool has_moments() const { return true; }

 protected:
  [[nodiscard]] virtual double do_log_density(Point x) const = 0;
};

/// Conditional proposal pi(y | x). log_density must be the log of a density
/// normalized in its first argument.
class ConditionalProposal {
 public:
  virtual ~ConditionalProposal() = default;

  [[nodiscard]] virtual std::size_t dimension() const = 0;
  [[nodiscard]] virtual bool is_independent() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;

  /// Draws y ~ pi(. | condition) into `out`.
  void sample(Point condition, RngStream& rng, std::span<double> out) const;
  [[nodiscard]] State sample(Point condition, RngStream& rng) const;

  /// log pi(candidate | condition).
  [[nodiscard]] double log_density(Point candidate, Point condition) const;

 protected:
  virtual void do_sample(Point condition, RngStream& rng, std::span<double> out) const = 0;
  [[nodiscard]] virtual double do_log_density(Point candidate, Point condition) const = 0;
};

/// Everything a weight may depend on. log_target is log p(candidate),
/// precomputed by the caller so that samplers evaluate the target once per
/// point.
struct WeightArgs {
  Point candidate;
  Point condition;
  double log_target;
  const ConditionalProposal& proposal;
};

/// Selection weight omega_j(candidate, condition) in log-space.
class WeightFunction {
 public:
  using LogWeightFn = std::function<double(const WeightArgs&)>;

  WeightFunction(std::string label, LogWeightFn fn);

  /// Returns log omega; -inf is allowed, NaN and +inf throw InvalidWeight.
  [[nodiscard]] double log_weight(const WeightArgs& args) const;

  [[nodiscard]] const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  LogWeightFn fn_;
};

/// log omega(candidate, condition) with the target evaluated here.
double log_weight_eval(const WeightFunction& w, const TargetDensity& target,
                       const ConditionalProposal& proposal, Point candidate, Point condition);

/// log(sum exp(v)); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

}  // namespace mtm

#endif  // MTM_CORE_HPP
