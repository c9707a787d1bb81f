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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mtm/oracle.hpp"

namespace mtm {
namespace {

// Acceptance probabilities written directly from the model tables, sharing
// nothing with the library evaluators.
enum class Variant { generalized, b1g1, b1g2, b1g3, b2g3, noref };

const std::vector<Variant> kVariants{Variant::generalized, Variant::b1g1, Variant::b1g2,
                                     Variant::b1g3,        Variant::b2g3, Variant::noref};

AcceptanceRule rule_for(Variant v) {
  switch (v) {
    case Variant::generalized:
      return AcceptanceRule::generalized();
    case Variant::b1g1:
      return AcceptanceRule::composed(BetaRule::min_ratio(), GammaRule(GammaKind::gamma1_Wx));
    case Variant::b1g2:
      return AcceptanceRule::composed(BetaRule::min_ratio(), GammaRule(GammaKind::gamma2_barker_like));
    case Variant::b1g3:
      return AcceptanceRule::composed(BetaRule::min_ratio(), GammaRule(GammaKind::gamma3_min_ratio));
    case Variant::b2g3:
      return AcceptanceRule::composed(BetaRule::barker(), GammaRule(GammaKind::gamma3_min_ratio));
    case Variant::noref:
      return AcceptanceRule::noref();
  }
  return AcceptanceRule::generalized();
}

struct IndependentAlpha {
  Variant variant;
  std::size_t* selection_mismatches;

  double operator()(const TransitionContext& c) const {
    const FiniteModel& m = c.model;
    const std::size_t n = m.tries();
    // Recompute the selection probabilities from scratch.
    double cand_sum = 0.0;
    double ref_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cand_sum += m.weight(i, c.candidates[i], c.x);
      ref_sum += m.weight(i, c.references[i], c.y);
    }
    const double w_y = m.weight(c.k, c.y, c.x) / cand_sum;
    const double w_x = m.weight(c.k, c.x, c.y) / ref_sum;
    if (std::abs(w_y - c.w_y) > 1e-14 || std::abs(w_x - c.w_x) > 1e-14) {
      ++*selection_mismatches;
    }
    const auto& q = m.proposals[c.k];
    const double r = m.target_mass[c.y] * q(c.y, c.x) / (m.target_mass[c.x] * q(c.x, c.y));
    switch (variant) {
      case Variant::generalized:
        return std::min(1.0, r * w_x / w_y);
      case Variant::b1g1:
        return std::min(1.0, r) * w_x;
      case Variant::b1g2:
        return std::min(1.0, r) * w_x / (w_x + w_y);
      case Variant::b1g3:
        return std::min(1.0, r) * std::min(1.0, w_x / w_y);
      case Variant::b2g3:
        return r / (1.0 + r) * std::min(1.0, w_x / w_y);
      case Variant::noref: {
        double ratio = r;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != c.k) {
            ratio *= m.proposals[i](c.y, c.candidates[i]) / m.proposals[i](c.x, c.candidates[i]);
          }
        }
        return std::min(1.0, ratio * w_x / w_y);
      }
    }
    return 0.0;
  }
};

double max_entry_difference(const KernelMatrix& a, const KernelMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, std::abs(a.transition(i, j) - b.transition(i, j)));
    }
  }
  return worst;
}

TEST(ExactKernel, SingleTryIsMetropolisHastings) {
  RngStream rng(1, 0);
  for (int rep = 0; rep < 20; ++rep) {
    RandomModelOptions opts;
    opts.states = 3;
    opts.tries = 1;
    const auto model = random_finite_model(opts, AcceptanceRule::generalized(), rng);
    const auto kernel = exact_kernel(model);
    const auto& q = model.proposals[0];
    const auto& p = model.target_mass;
    for (std::size_t x = 0; x < 3; ++x) {
      double off = 0.0;
      for (std::size_t y = 0; y < 3; ++y) {
        if (y == x) {
          continue;
        }
        const double mh = q(x, y) * std::min(1.0, p[y] * q(y, x) / (p[x] * q(x, y)));
        off += mh;
        EXPECT_NEAR(kernel.transition(x, y), mh, 1e-14);
      }
      EXPECT_NEAR(kernel.transition(x, x), 1.0 - off, 1e-14);
    }
  }
}

TEST(ExactKernel, TwoStateSymmetricCase) {
  FiniteModel model;
  model.target_mass = {1.0, 1.0};
  SquareMatrix q(2);
  q(0, 0) = 0.3;
  q(0, 1) = 0.7;
  q(1, 0) = 0.7;
  q(1, 1) = 0.3;
  model.proposals = {q, q};
  model.weight = [](std::size_t, std::size_t, std::size_t) { return 1.0; };
  const auto kernel = exact_kernel(model);
  EXPECT_NEAR(kernel.transition(0, 1), kernel.transition(1, 0), 1e-15);
  EXPECT_GT(kernel.transition(0, 1), 0.0);
}

TEST(ExactKernel, RowsSumToOne) {
  RngStream rng(2, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto model = random_finite_model({}, rule_for(kVariants[rep % kVariants.size()]), rng);
    const auto kernel = exact_kernel(model);
    for (std::size_t x = 0; x < kernel.size(); ++x) {
      ASSERT_LE(kernel.completeness_error(x), 1e-10);
      double row = 0.0;
      for (std::size_t y = 0; y < kernel.size(); ++y) {
        ASSERT_GE(kernel.transition(x, y), -1e-15);
        row += kernel.transition(x, y);
      }
      ASSERT_NEAR(row, 1.0, 1e-10);
      ASSERT_NEAR(kernel.transition(x, x), kernel.enumerated_stay[x], 1e-10);
    }
  }
}

TEST(ExactKernel, BudgetExceeded) {
  RngStream rng(3, 0);
  RandomModelOptions big_m;
  big_m.states = kOracleMaxStates + 1;
  EXPECT_THROW((void)exact_kernel(random_finite_model(big_m, AcceptanceRule::generalized(), rng)), BudgetExceeded);
  RandomModelOptions big_n;
  big_n.tries = kOracleMaxTries + 1;
  EXPECT_THROW((void)exact_kernel(random_finite_model(big_n, AcceptanceRule::generalized(), rng)), BudgetExceeded);
}

TEST(ExactKernel, InvalidModelsAreRejected) {
  FiniteModel model;
  model.target_mass = {1.0, 0.0};
  model.proposals = {SquareMatrix(2, 0.5)};
  model.weight = [](std::size_t, std::size_t, std::size_t) { return 1.0; };
  EXPECT_THROW((void)exact_kernel(model), ContractViolation);
  model.target_mass = {1.0, 1.0};
  model.proposals = {SquareMatrix(2, 0.4)};
  EXPECT_THROW((void)exact_kernel(model), ContractViolation);
}

class Battery : public ::testing::TestWithParam<std::tuple<Variant, FiniteWeightStyle, bool>> {};

TEST_P(Battery, DetailedBalanceAndIndependentAlpha) {
  const auto [variant, weights, heterogeneous] = GetParam();
  RngStream rng(4, static_cast<std::uint64_t>(variant));
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 50; ++rep) {
    RandomModelOptions opts;
    opts.weights = weights;
    opts.heterogeneous = heterogeneous;
    const auto model = random_finite_model(opts, rule_for(variant), rng);
    const auto kernel = exact_kernel(model);
    const auto reference = exact_kernel(model, IndependentAlpha{variant, &mismatches});
    ASSERT_LE(max_entry_difference(kernel, reference), 1e-14);
    ASSERT_LE(check_detailed_balance(kernel, model.target_mass), 1e-10);
    ASSERT_LE(check_detailed_balance(reference, model.target_mass), 1e-10);
    ASSERT_LE(stationarity_error(kernel, model.target_mass), 1e-10);
  }
  EXPECT_EQ(mismatches, 0U);
}

std::string battery_name(const ::testing::TestParamInfo<Battery::ParamType>& info) {
  static const char* const kNames[] = {"generalized", "beta1gamma1", "beta1gamma2",
                                       "beta1gamma3", "beta2gamma3", "noref"};
  const auto [v, w, het] = info.param;
  return std::string(kNames[static_cast<int>(v)]) + (w == FiniteWeightStyle::random ? "_random" : "_importance") +
         (het ? "_heterogeneous" : "_shared");
}

INSTANTIATE_TEST_SUITE_P(AllVariants, Battery,
                         ::testing::Combine(::testing::ValuesIn(kVariants),
                                            ::testing::Values(FiniteWeightStyle::random,
                                                              FiniteWeightStyle::importance),
                                            ::testing::Bool()),
                         battery_name);

TEST(Battery, ThreeTriesLargerStateSpace) {
  RngStream rng(5, 0);
  for (Variant v : {Variant::generalized, Variant::noref, Variant::b1g3}) {
    RandomModelOptions opts;
    opts.states = 5;
    opts.tries = 3;
    const auto model = random_finite_model(opts, rule_for(v), rng);
    EXPECT_LE(check_detailed_balance(exact_kernel(model), model.target_mass), 1e-10);
  }
}

TEST(NegativeControl, AlwaysAcceptBreaksBalance) {
  RngStream rng(6, 0);
  const auto model = random_finite_model({}, AcceptanceRule::generalized(), rng);
  const auto kernel = exact_kernel(model, [](const TransitionContext&) { return 1.0; });
  EXPECT_GT(check_detailed_balance(kernel, model.target_mass), 1e-3);
}

TEST(NegativeControl, WrongSelectionRatioBreaksBalance) {
  RngStream rng(7, 0);
  const auto model = random_finite_model({}, AcceptanceRule::generalized(), rng);
  const auto kernel = exact_kernel(model, [](const TransitionContext& c) {
    const auto& q = c.model.proposals[c.k];
    const double r = c.model.target_mass[c.y] * q(c.y, c.x) / (c.model.target_mass[c.x] * q(c.x, c.y));
    return std::min(1.0, r);
  });
  EXPECT_GT(check_detailed_balance(kernel, model.target_mass), 1e-3);
}

TEST(IndependentProposals, BothKernelsReversible) {
  RngStream rng(8, 0);
  double largest_gap = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    RandomModelOptions opts;
    opts.independent = true;
    opts.weights = FiniteWeightStyle::importance;
    auto model = random_finite_model(opts, AcceptanceRule::generalized(), rng);
    const auto generalized = exact_kernel(model);
    model.acceptance = AcceptanceRule::noref();
    const auto noref = exact_kernel(model);
    EXPECT_LE(check_detailed_balance(generalized, model.target_mass), 1e-10);
    EXPECT_LE(check_detailed_balance(noref, model.target_mass), 1e-10);
    largest_gap = std::max(largest_gap, max_entry_difference(generalized, noref));
  }
  // Reusing the candidates as reference points changes W_x, so the two
  // samplers are different reversible kernels, not one kernel.
  EXPECT_GT(largest_gap, 1e-3);
}

TEST(IndependentProposals, AcceptanceFormulasCoincide) {
  RngStream rng(9, 0);
  RandomModelOptions opts;
  opts.independent = true;
  opts.tries = 3;
  const auto model = random_finite_model(opts, AcceptanceRule::noref(), rng);
  std::size_t checked = 0;
  std::size_t unequal = 0;
  IndependentAlpha generalized{Variant::generalized, &unequal};
  IndependentAlpha noref{Variant::noref, &unequal};
  (void)exact_kernel(model, [&](const TransitionContext& c) {
    ++checked;
    if (std::abs(generalized(c) - noref(c)) > 1e-12) {
      ++unequal;
    }
    return noref(c);
  });
  EXPECT_GT(checked, 0U);
  EXPECT_EQ(unequal, 0U);
}

TEST(Adapters, FiniteProposalIndependenceAndIndices) {
  SquareMatrix same(3, 1.0 / 3.0);
  EXPECT_TRUE(FiniteProposal(same).is_independent());
  SquareMatrix differ(3, 1.0 / 3.0);
  differ(1, 0) = 0.5;
  differ(1, 1) = 1.0 / 6.0;
  EXPECT_FALSE(FiniteProposal(differ).is_independent());
  EXPECT_EQ(finite_index(State{2.0}, 3), 2U);
  EXPECT_THROW((void)finite_index(State{3.0}, 3), ContractViolation);
  EXPECT_THROW((void)finite_index(State{0.5}, 3), ContractViolation);
}

TEST(Adapters, FiniteProposalSamplesItsRow) {
  SquareMatrix q(3);
  q(0, 0) = 0.2;
  q(0, 1) = 0.5;
  q(0, 2) = 0.3;
  const FiniteProposal prop(q);
  RngStream rng(10, 0);
  std::vector<int> counts(3, 0);
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    ++counts[finite_index(prop.sample(State{0.0}, rng), 3)];
  }
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_NEAR(counts[c] / static_cast<double>(kDraws), q(0, c), 0.01);
  }
}

}  // namespace
}  // namespace mtm
