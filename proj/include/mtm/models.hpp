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

#ifndef MTM_MODELS_HPP
#define MTM_MODELS_HPP

/// \file
/// Built-in targets, proposals and weight presets used by the experiments.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mtm/core.hpp"

namespace mtm {

// ---------------------------------------------------------------------------
// Targets

/// log p(x) = -(x^2 - 4)^2 / 4. Modes at +-2.
double bimodal_logpdf(double x) noexcept;

/// log p(x) = -1.5 log(x - eta) - nu / (2 (x - eta)) for x > eta, -inf otherwise.
double levy_logpdf(double x, double eta, double nu) noexcept;

class BimodalQuartic final : public TargetDensity {
 public:
  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] std::string name() const override { return "bimodal"; }

 protected:
  [[nodiscard]] double do_log_density(Point x) const override { return bimodal_logpdf(x[0]); }
};

/// Heavy-tailed Levy density on (eta, inf). Its integral is sqrt(2 pi / nu).
class LevyDensity final : public TargetDensity {
 public:
  LevyDensity(double eta, double nu);

  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] bool has_moments() const override { return false; }

  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] double nu() const noexcept { return nu_; }

 protected:
  [[nodiscard]] double do_log_density(Point x) const override { return levy_logpdf(x[0], eta_, nu_); }

 private:
  double eta_;
  double nu_;
};

/// Two-dimensional mixture of three axis-aligned Gaussian bumps (eyes and
/// nose) and a banana-shaped ridge, with equal mixture weights 1/4. The
/// components are unnormalized: each peaks at exactly 1.
///
/// Banana component (BananaForm::printed):
///   log p4(x) = -(x1)^2 / eta - (x1 - rho (x2)^2 + 100 rho)^2 / 2,
/// eta = 144.5, rho = 0.08. BananaForm::transposed swaps the roles of x1 and
/// x2, which bends the ridge into a U below the nose instead of sideways.
enum class BananaForm { printed, transposed };

class SmilingFace final : public TargetDensity {
 public:
  explicit SmilingFace(BananaForm form = BananaForm::printed) : form_{form} {}

  struct Bump {
    double mean1, mean2, sd1, sd2;
  };
  static constexpr std::array<Bump, 3> kBumps{{{-7.0, 35.0, 2.0, 2.0}, {7.0, 35.0, 2.0, 2.0}, {0.0, 23.0, 1.0, 4.0}}};
  static constexpr double kBananaEta = 144.5;
  static constexpr double kBananaRho = 0.08;

  [[nodiscard]] std::size_t dimension() const override { return 2; }
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] std::size_t component_count() const override { return 4; }
  [[nodiscard]] double component_log_density(std::size_t i, Point x) const override;
  [[nodiscard]] BananaForm banana_form() const noexcept { return form_; }

 protected:
  [[nodiscard]] double do_log_density(Point x) const override;

 private:
  BananaForm form_;
};

/// log of the smiling-face mixture at x (must be 2-D).
double smiling_face_logpdf(Point x);

/// 1-based argmax of the component densities; ties go to the lowest index.
std::size_t mode_index(const TargetDensity& target, Point x);

// ---------------------------------------------------------------------------
// Proposals

/// Isotropic Gaussian random walk N(x, sigma^2 I).
class GaussianRandomWalk final : public ConditionalProposal {
 public:
  GaussianRandomWalk(double sigma, std::size_t dimension = 1);

  [[nodiscard]] std::size_t dimension() const override { return dim_; }
  [[nodiscard]] bool is_independent() const override { return false; }
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] double sigma() const noexcept { return sigma_; }

 protected:
  void do_sample(Point condition, RngStream& rng, std::span<double> out) const override;
  [[nodiscard]] double do_log_density(Point candidate, Point condition) const override;

 private:
  double sigma_;
  std::size_t dim_;
  double log_norm_;
  double inv_two_var_;
};

/// Independent isotropic Gaussian N(mu, sigma^2 I).
class IndependentGaussian final : public ConditionalProposal {
 public:
  IndependentGaussian(std::vector<double> mean, double sigma);
  IndependentGaussian(double mean, double sigma) : IndependentGaussian(std::vector<double>{mean}, sigma) {}

  [[nodiscard]] std::size_t dimension() const override { return mean_.size(); }
  [[nodiscard]] bool is_independent() const override { return true; }
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] const std::vector<double>& mean() const noexcept { return mean_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }

 protected:
  void do_sample(Point condition, RngStream& rng, std::span<double> out) const override;
  [[nodiscard]] double do_log_density(Point candidate, Point condition) const override;

 private:
  std::vector<double> mean_;
  double sigma_;
  double log_norm_;
  double inv_two_var_;
};

/// Independent uniform on [lower, upper] (1-D).
class IndependentUniform final : public ConditionalProposal {
 public:
  IndependentUniform(double lower, double upper);

  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] bool is_independent() const override { return true; }
  [[nodiscard]] std::string name() const override;

 protected:
  void do_sample(Point condition, RngStream& rng, std::span<double> out) const override;
  [[nodiscard]] double do_log_density(Point candidate, Point condition) const override;

 private:
  double lower_;
  double upper_;
};

// ---------------------------------------------------------------------------
// Weights

/// Symmetric non-negative function lambda(x, y), in log-space.
using LogLambda = std::function<double(Point, Point)>;

enum class WeightKind {
  importance,            // p(y) / pi(y|x)
  target,                // p(y)
  constant,              // 1
  sqrt_target,           // p(y)^(1/2)
  target_sq,             // p(y)^2
  target_cube,           // p(y)^3
  reverse_proposal,      // pi(x|y)
  inv_proposal,          // 1 / pi(y|x)
  target_times_reverse,  // p(y) pi(x|y)
  lambda_form,           // p(y) pi(x|y) lambda(x,y)
  target_power,          // p(y)^theta
};

/// Config identifier for a weight kind ("importance", "target_power", ...).
std::string weight_id(WeightKind kind);
/// All weight identifiers, in declaration order.
std::vector<std::string> weight_ids();
/// Throws std::invalid_argument for an unknown id.
WeightKind weight_kind_from_id(const std::string& id);

/// Builds the preset. `theta` is used by target_power (must be > 0);
/// `log_lambda` by lambda_form (defaults to lambda = 1).
WeightFunction make_weight(WeightKind kind, double theta = 1.0, LogLambda log_lambda = {});

/// lambda(x, y) = 1.
LogLambda lambda_one();
/// lambda(x, y) = exp(-|x - y|^2 / (2 s^2)).
LogLambda lambda_gauss(double s);

}  // namespace mtm

#endif  // MTM_MODELS_HPP
