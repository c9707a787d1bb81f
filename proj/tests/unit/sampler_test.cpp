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
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "mtm/diagnostics.hpp"
#include "mtm/sampler.hpp"

namespace mtm {
namespace {

// Density 1 on [0, 1], zero elsewhere.
class UnitBox final : public TargetDensity {
 public:
  [[nodiscard]] std::size_t dimension() const override { return 1; }
  [[nodiscard]] std::string name() const override { return "unit_box"; }

 protected:
  [[nodiscard]] double do_log_density(Point x) const override {
    return x[0] >= 0.0 && x[0] <= 1.0 ? 0.0 : kNegInf;
  }
};

SamplerConfig make_config(std::shared_ptr<const ConditionalProposal> prop, std::size_t n,
                          WeightKind weight = WeightKind::importance,
                          AcceptanceRule acceptance = AcceptanceRule::generalized(),
                          RecordDetail detail = RecordDetail::summary) {
  return SamplerConfig{repeat_proposal(prop, n), make_weight(weight), std::move(acceptance), detail};
}

TEST(SelectCandidate, SinglePositiveWeight) {
  RngStream rng(1, 0);
  const std::array<double, 3> lw{0.0, kNegInf, kNegInf};
  for (int i = 0; i < 10; ++i) {
    const auto sel = select_candidate(lw, rng);
    ASSERT_TRUE(sel);
    EXPECT_EQ(sel->index, 0U);
    EXPECT_EQ(sel->w_y, 1.0);
  }
}

TEST(SelectCandidate, EqualWeights) {
  RngStream rng(2, 0);
  const std::array<double, 4> lw{-3.5, -3.5, -3.5, -3.5};
  for (int i = 0; i < 10; ++i) {
    const auto sel = select_candidate(lw, rng);
    ASSERT_TRUE(sel);
    EXPECT_DOUBLE_EQ(sel->w_y, 0.25);
  }
}

TEST(SelectCandidate, Frequencies) {
  RngStream rng(3, 0);
  const std::array<double, 3> lw{std::log(1.0), std::log(2.0), std::log(3.0)};
  std::array<int, 3> counts{};
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const auto sel = select_candidate(lw, rng);
    ++counts[sel->index];
    ASSERT_NEAR(sel->w_y, (sel->index + 1.0) / 6.0, 1e-15);
    ASSERT_NEAR(sel->log_w_y, std::log((sel->index + 1.0) / 6.0), 1e-14);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(counts[j] / static_cast<double>(kDraws), (j + 1.0) / 6.0, 0.01);
  }
}

TEST(SelectCandidate, AllZeroSignalsWithoutConsumingRandomness) {
  RngStream rng(4, 0);
  RngStream fresh(4, 0);
  const std::array<double, 2> lw{kNegInf, kNegInf};
  EXPECT_FALSE(select_candidate(lw, rng));
  EXPECT_EQ(rng.uniform(), fresh.uniform());
}

TEST(SelectCandidate, HugeLogWeightsDoNotOverflow) {
  RngStream rng(5, 0);
  const std::array<double, 2> lw{1000.0, 1000.0 + std::log(3.0)};
  const auto sel = select_candidate(lw, rng);
  ASSERT_TRUE(sel);
  EXPECT_NEAR(sel->w_y, sel->index == 0 ? 0.25 : 0.75, 1e-13);
}

TEST(Step, AllZeroWeightsRejectAndStay) {
  const UnitBox target;
  const auto cfg = make_config(std::make_shared<IndependentUniform>(5.0, 6.0), 4);
  RngStream rng(6, 0);
  const State x{0.5};
  for (auto form : {AcceptanceRule::generalized(), AcceptanceRule::noref()}) {
    auto c = cfg;
    c.acceptance = form;
    const auto rec = mtm_step(x, c, target, rng);
    EXPECT_FALSE(rec.selected);
    EXPECT_FALSE(rec.accepted);
    EXPECT_EQ(rec.alpha, 0.0);
  }
  const auto trace = run_chain(x, cfg, target, 50, rng);
  for (std::size_t t = 0; t <= 50; ++t) {
    EXPECT_EQ(trace.states[t][0], 0.5);
  }
}

TEST(Step, NorefRequiresNorefForm) {
  const BimodalQuartic target;
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(1.0), 2);
  RngStream rng(7, 0);
  EXPECT_THROW((void)mtm_step_noref(State{0.0}, cfg, target, rng), ContractViolation);
}

TEST(Step, ZeroDensityStartIsContractViolation) {
  const LevyDensity target(0.0, 2.0);
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(1.0), 2);
  RngStream rng(8, 0);
  EXPECT_THROW((void)run_chain(State{-1.0}, cfg, target, 10, rng), ContractViolation);
}

// Textbook random-walk Metropolis-Hastings with the documented draw order:
// one normal for the candidate, one uniform for the decision.
std::vector<double> textbook_mh(double x0, double sigma, std::size_t steps, RngStream& rng) {
  std::vector<double> path{x0};
  double x = x0;
  for (std::size_t t = 0; t < steps; ++t) {
    const double y = x + sigma * rng.normal();
    const double a = std::exp(std::min(0.0, bimodal_logpdf(y) - bimodal_logpdf(x)));
    if (rng.uniform() < a) {
      x = y;
    }
    path.push_back(x);
  }
  return path;
}

TEST(Reduction, SingleTryIsPathwiseMetropolisHastings) {
  const BimodalQuartic target;
  for (auto weight : {WeightKind::importance, WeightKind::target, WeightKind::constant}) {
    const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 1, weight);
    RngStream a(9, 0);
    RngStream b(9, 0);
    const auto trace = run_chain(State{0.0}, cfg, target, 2000, a);
    const auto path = textbook_mh(0.0, 2.0, 2000, b);
    std::size_t mismatches = 0;
    for (std::size_t t = 0; t < path.size(); ++t) {
      mismatches += trace.states[t][0] != path[t];
    }
    EXPECT_EQ(mismatches, 0U) << weight_id(weight);
  }
}

TEST(RunChain, SingleStepGivesOneRecord) {
  const BimodalQuartic target;
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 3);
  RngStream rng(10, 0);
  const auto trace = run_chain(State{0.0}, cfg, target, 1, rng);
  EXPECT_EQ(trace.steps(), 1U);
  EXPECT_EQ(trace.states.size(), 2U);
}

TEST(RunChain, SameSeedSameTrace) {
  const BimodalQuartic target;
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 5);
  RngStream a(11, 4);
  RngStream b(11, 4);
  const auto ta = run_chain(State{0.0}, cfg, target, 500, a);
  const auto tb = run_chain(State{0.0}, cfg, target, 500, b);
  EXPECT_EQ(ta.states, tb.states);
  for (std::size_t t = 0; t < ta.steps(); ++t) {
    EXPECT_EQ(ta.records[t].alpha, tb.records[t].alpha);
  }
}

TEST(RunChain, RecordsAreConsistentWithStates) {
  const BimodalQuartic target;
  const auto proposal = std::make_shared<GaussianRandomWalk>(2.0);
  for (auto form : {AcceptanceRule::generalized(), AcceptanceRule::noref(),
                    AcceptanceRule::composed(BetaRule::barker(), GammaRule(GammaKind::gamma2_barker_like))}) {
    const auto cfg = make_config(proposal, 4, WeightKind::importance, form, RecordDetail::full);
    RngStream rng(12, 0);
    const auto trace = run_chain(State{0.0}, cfg, target, 300, rng);
    for (std::size_t t = 0; t < trace.steps(); ++t) {
      const auto& rec = trace.records[t];
      ASSERT_TRUE(rec.selected);
      const std::size_t k = *rec.selected;
      EXPECT_EQ(rec.current, State{trace.states[t]});
      EXPECT_EQ(rec.proposed, State{rec.candidates[k]});
      EXPECT_NEAR(rec.log_w_y, rec.candidate_log_weights[k] - log_sum_exp(rec.candidate_log_weights), 1e-12);
      EXPECT_EQ(State{rec.references[k]}, rec.current);
      EXPECT_NEAR(rec.log_w_x, rec.reference_log_weights[k] - log_sum_exp(rec.reference_log_weights), 1e-12);
      if (form.form() == AcceptanceForm::noref) {
        for (std::size_t i = 0; i < 4; ++i) {
          if (i != k) {
            EXPECT_EQ(State{rec.references[i]}, State{rec.candidates[i]});
          }
        }
      }
      EXPECT_GE(rec.alpha, 0.0);
      EXPECT_LE(rec.alpha, 1.0);
      const State next{trace.states[t + 1]};
      EXPECT_EQ(next, rec.accepted ? rec.proposed : rec.current);
    }
  }
}

TEST(RunChain, NeverOccupiesZeroDensityStates) {
  const LevyDensity target(0.0, 2.0);
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(3.0), 5);
  RngStream rng(13, 0);
  const auto trace = run_chain(State{2.0}, cfg, target, 2000, rng);
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    ASSERT_GT(target.log_density(trace.states[t]), kNegInf);
  }
}

double mean_over_runs(const SamplerConfig& cfg, std::size_t runs, std::size_t steps,
                      const std::function<double(const ChainTrace&)>& stat) {
  const BimodalQuartic target;
  double sum = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    RngStream rng(1, r);
    sum += stat(run_chain(State{0.0}, cfg, target, steps, rng));
  }
  return sum / static_cast<double>(runs);
}

TEST(Statistical, MetropolisHastingsAcceptance) {
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 1);
  EXPECT_NEAR(mean_over_runs(cfg, 20, 5000, acceptance_rate), 0.30, 0.02);
}

TEST(Statistical, HundredTriesAcceptance) {
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 100);
  EXPECT_NEAR(mean_over_runs(cfg, 10, 5000, acceptance_rate), 0.86, 0.02);
}

TEST(Statistical, NorefFiveTriesCorrelation) {
  const auto cfg =
      make_config(std::make_shared<GaussianRandomWalk>(10.0), 5, WeightKind::importance, AcceptanceRule::noref());
  auto corr = [](const ChainTrace& t) { return lag1_correlation(t, 0).value(); };
  EXPECT_NEAR(mean_over_runs(cfg, 20, 5000, corr), 0.70, 0.05);
}

TEST(Statistical, AcceptanceRateMatchesMeanAlpha) {
  const BimodalQuartic target;
  const auto cfg = make_config(std::make_shared<GaussianRandomWalk>(2.0), 5);
  RngStream rng(14, 0);
  const auto trace = run_chain(State{0.0}, cfg, target, 20000, rng);
  const double rate = acceptance_rate(trace);
  const double alpha = mean_alpha(trace.records);
  // Per-step Bernoulli noise bounds the standard error by 0.5 / sqrt(T).
  EXPECT_NEAR(rate, alpha, 3.0 * 0.5 / std::sqrt(20000.0));
}

}  // namespace
}  // namespace mtm
