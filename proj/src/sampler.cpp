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

#include "mtm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtm {

namespace {

void validate(const SamplerConfig& cfg, const TargetDensity& target) {
  if (cfg.proposals.empty()) {
    throw ContractViolation("sampler needs at least one proposal");
  }
  for (const auto& p : cfg.proposals) {
    if (!p) {
      throw ContractViolation("null proposal in sampler config");
    }
    if (p->dimension() != target.dimension()) {
      throw ContractViolation("proposal '" + p->name() + "' does not match the target dimension");
    }
  }
}

std::vector<const ConditionalProposal*> raw_proposals(const SamplerConfig& cfg) {
  std::vector<const ConditionalProposal*> out;
  out.reserve(cfg.proposals.size());
  for (const auto& p : cfg.proposals) {
    out.push_back(p.get());
  }
  return out;
}

enum class ReferenceMode { drawn, reused };

// Per-thread buffers reused across steps.
struct Scratch {
  PointSet candidates;
  PointSet refs;
  std::vector<double> lp_cand;
  std::vector<double> lw_cand;
  std::vector<double> lw_ref;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

// Steps 1-5 are shared; the two samplers differ only in how reference
// points are formed and in the final acceptance formula.
StepRecord mtm_step_impl(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng,
                         ReferenceMode mode) {
  validate(cfg, target);
  const std::size_t n = cfg.tries();
  const std::size_t d = target.dimension();
  const double lp_x = target.log_density(x);
  if (lp_x == kNegInf) {
    throw ContractViolation("current state has zero target density");
  }

  StepRecord rec;
  rec.tries = n;

  // 1-2. candidates and their weights
  Scratch& ws = scratch();
  PointSet& candidates = ws.candidates;
  candidates.reshape(d, n);
  std::vector<double>& lp_cand = ws.lp_cand;
  std::vector<double>& lw_cand = ws.lw_cand;
  lp_cand.resize(n);
  lw_cand.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    cfg.proposals[j]->sample(x, rng, candidates.mutable_at(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    lp_cand[j] = target.log_density(candidates[j]);
    lw_cand[j] = cfg.weight.log_weight({candidates[j], x, lp_cand[j], *cfg.proposals[j]});
  }
  rec.log_candidate_weight_sum = log_sum_exp(lw_cand);

  const bool full = cfg.detail == RecordDetail::full;
  if (full) {
    rec.current = State{x};
    rec.candidates = candidates;
    rec.candidate_log_weights = lw_cand;
  }

  // 3. selection
  const auto sel = select_candidate(lw_cand, rng);
  if (!sel) {
    (void)rng.uniform();
    return rec;
  }
  const std::size_t k = sel->index;
  const Point y = candidates[k];
  rec.selected = k;
  rec.log_w_y = sel->log_w_y;
  rec.proposed = State{y};

  // 4-5. reference points and W_x
  PointSet& refs = ws.refs;
  refs.reshape(d, n);
  std::vector<double>& lw_ref = ws.lw_ref;
  lw_ref.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto slot = refs.mutable_at(i);
    if (i == k) {
      std::copy(x.begin(), x.end(), slot.begin());
    } else if (mode == ReferenceMode::drawn) {
      cfg.proposals[i]->sample(y, rng, slot);
    } else {
      const Point yi = candidates[i];
      std::copy(yi.begin(), yi.end(), slot.begin());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double lp_ref = 0.0;
    if (i == k) {
      lp_ref = lp_x;
    } else if (mode == ReferenceMode::reused) {
      lp_ref = lp_cand[i];
    } else {
      lp_ref = target.log_density(refs[i]);
    }
    lw_ref[i] = cfg.weight.log_weight({refs[i], y, lp_ref, *cfg.proposals[i]});
  }
  const double log_ref_sum = log_sum_exp(lw_ref);
  rec.log_w_x = lw_ref[k] == kNegInf ? kNegInf : lw_ref[k] - log_ref_sum;
  if (full) {
    rec.references = refs;
    rec.reference_log_weights = lw_ref;
  }

  // 6. acceptance
  double alpha = 0.0;
  switch (cfg.acceptance.form()) {
    case AcceptanceForm::generalized:
      alpha = std::exp(log_alpha_generalized(x, y, rec.log_w_x, rec.log_w_y, target, *cfg.proposals[k]));
      break;
    case AcceptanceForm::composed: {
      if (rec.log_w_x == kNegInf || lp_cand[k] == kNegInf) {
        alpha = 0.0;
        break;
      }
      const double beta =
          cfg.acceptance.beta().evaluate(x, y, lp_x, lp_cand[k], cfg.proposals[k]->log_density(y, x),
                                         cfg.proposals[k]->log_density(x, y));
      alpha = beta * std::exp(cfg.acceptance.gamma().log_evaluate(rec.log_w_x, rec.log_w_y));
      break;
    }
    case AcceptanceForm::noref: {
      const auto props = raw_proposals(cfg);
      alpha = std::exp(log_alpha_noref(x, k, candidates, rec.log_w_x, rec.log_w_y, target, props));
      break;
    }
  }
  rec.alpha = alpha;
  rec.accepted = rng.uniform() < alpha;
  return rec;
}

}  // namespace

std::vector<std::shared_ptr<const ConditionalProposal>> repeat_proposal(
    const std::shared_ptr<const ConditionalProposal>& proposal, std::size_t count) {
  return std::vector<std::shared_ptr<const ConditionalProposal>>(count, proposal);
}

double StepRecord::w_y() const { return std::exp(log_w_y); }

double StepRecord::w_x() const { return std::exp(log_w_x); }

std::optional<Selection> select_candidate(std::span<const double> log_weights, RngStream& rng) {
  if (log_weights.empty()) {
    throw ContractViolation("cannot select from an empty candidate list");
  }
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (m == kNegInf) {
    return std::nullopt;
  }
  if (log_weights.size() == 1) {
    return Selection{0, 1.0, 0.0};
  }
  std::vector<double> w(log_weights.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = std::exp(log_weights[j] - m);
    total += w[j];
  }
  const double target_mass = rng.uniform() * total;
  std::size_t k = w.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    acc += w[j];
    if (target_mass < acc) {
      k = j;
      break;
    }
  }
  if (k == w.size()) {
    // Rounding pushed the draw past the last cumulative sum.
    k = w.size() - 1;
    while (w[k] == 0.0) {
      --k;
    }
  }
  return Selection{k, w[k] / total, (log_weights[k] - m) - std::log(total)};
}

StepRecord mtm_step_generalized(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng) {
  if (cfg.acceptance.form() == AcceptanceForm::noref) {
    throw ContractViolation("reference-drawing step cannot use the noref acceptance form");
  }
  return mtm_step_impl(x, cfg, target, rng, ReferenceMode::drawn);
}

StepRecord mtm_step_noref(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng) {
  if (cfg.acceptance.form() != AcceptanceForm::noref) {
    throw ContractViolation("noref step requires the noref acceptance form");
  }
  return mtm_step_impl(x, cfg, target, rng, ReferenceMode::reused);
}

StepRecord mtm_step(Point x, const SamplerConfig& cfg, const TargetDensity& target, RngStream& rng) {
  return cfg.acceptance.form() == AcceptanceForm::noref ? mtm_step_noref(x, cfg, target, rng)
                                                        : mtm_step_generalized(x, cfg, target, rng);
}

ChainTrace run_chain(Point init, const SamplerConfig& cfg, const TargetDensity& target, std::size_t steps,
                     RngStream& rng) {
  if (steps == 0) {
    throw ContractViolation("a chain needs at least one step");
  }
  if (target.log_density(init) == kNegInf) {
    throw ContractViolation("initial state has zero target density");
  }
  ChainTrace trace;
  trace.states = PointSet(init.size(), 0);
  trace.states.reserve(steps + 1);
  trace.states.push_back(init);
  trace.records.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const Point x = trace.states[t];
    StepRecord rec = mtm_step(x, cfg, target, rng);
    if (rec.accepted) {
      trace.states.push_back(rec.proposed);
    } else {
      // push_back may reallocate; copy through a temporary.
      const std::vector<double> stay(x.begin(), x.end());
      trace.states.push_back(stay);
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace mtm
