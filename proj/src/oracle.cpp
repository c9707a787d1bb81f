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

#include "mtm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

namespace mtm {

namespace {

// Advances a base-M odometer; false once it wraps around.
bool next_tuple(std::vector<std::size_t>& digits, std::size_t base) {
  for (auto& d : digits) {
    if (++d < base) {
      return true;
    }
    d = 0;
  }
  return false;
}

struct Adapters {
  FiniteTarget target;
  std::vector<std::unique_ptr<FiniteProposal>> owned;
  std::vector<const ConditionalProposal*> proposals;

  explicit Adapters(const FiniteModel& m) : target{m.target_mass} {
    for (const auto& t : m.proposals) {
      owned.push_back(std::make_unique<FiniteProposal>(t));
      proposals.push_back(owned.back().get());
    }
  }
};

double standard_alpha(const FiniteModel& m, const Adapters& ad, const TransitionContext& c) {
  const std::array<double, 1> px{static_cast<double>(c.x)};
  const std::array<double, 1> py{static_cast<double>(c.y)};
  switch (m.acceptance.form()) {
    case AcceptanceForm::generalized:
      return alpha_generalized(px, py, c.w_x, c.w_y, ad.target, *ad.proposals[c.k]);
    case AcceptanceForm::composed:
      return eval_beta(m.acceptance.beta(), px, py, ad.target, *ad.proposals[c.k]) *
             eval_gamma(m.acceptance.gamma(), c.w_x, c.w_y);
    case AcceptanceForm::noref: {
      PointSet cands(1, 0);
      for (std::size_t v : c.candidates) {
        const std::array<double, 1> p{static_cast<double>(v)};
        cands.push_back(p);
      }
      return alpha_noref(px, c.k, cands, c.w_x, c.w_y, ad.target, ad.proposals);
    }
  }
  return 0.0;
}

}  // namespace

void FiniteModel::validate() const {
  const std::size_t m = states();
  if (m == 0 || proposals.empty()) {
    throw ContractViolation("finite model needs states and at least one proposal");
  }
  for (double p : target_mass) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ContractViolation("finite model target masses must be positive");
    }
  }
  for (const auto& t : proposals) {
    if (t.size() != m) {
      throw ContractViolation("proposal table size does not match the state count");
    }
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (double v : t.row(i)) {
        if (v < 0.0) {
          throw ContractViolation("proposal probabilities must be non-negative");
        }
        s += v;
      }
      if (std::abs(s - 1.0) > 1e-12) {
        throw ContractViolation("proposal row does not sum to 1");
      }
    }
  }
  if (!weight) {
    throw ContractViolation("finite model has no weight function");
  }
}

double KernelMatrix::completeness_error(std::size_t x) const {
  double s = enumerated_stay[x];
  for (std::size_t y = 0; y < size(); ++y) {
    if (y != x) {
      s += transition(x, y);
    }
  }
  return std::abs(s - 1.0);
}

KernelMatrix exact_kernel(const FiniteModel& model, const AcceptanceOverride& override_alpha) {
  model.validate();
  const std::size_t m = model.states();
  const std::size_t n = model.tries();
  if (m > kOracleMaxStates || n > kOracleMaxTries) {
    throw BudgetExceeded("kernel enumeration limited to " + std::to_string(kOracleMaxStates) + " states and " +
                         std::to_string(kOracleMaxTries) + " tries (got " + std::to_string(m) + ", " +
                         std::to_string(n) + ")");
  }
  const Adapters adapters{model};
  const bool draws_references = model.acceptance.form() != AcceptanceForm::noref;

  KernelMatrix kernel{SquareMatrix(m), std::vector<double>(m, 0.0)};
  std::vector<std::size_t> cand(n, 0);
  std::vector<std::size_t> refs(n, 0);
  std::vector<std::size_t> free_refs(n > 0 ? n - 1 : 0, 0);
  std::vector<double> w(n);

  for (std::size_t x = 0; x < m; ++x) {
    std::fill(cand.begin(), cand.end(), 0);
    do {
      double q = 1.0;
      double w_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        q *= model.proposals[j](x, cand[j]);
        w[j] = model.weight(j, cand[j], x);
        w_sum += w[j];
      }
      if (q == 0.0) {
        continue;
      }
      if (w_sum == 0.0) {
        kernel.enumerated_stay[x] += q;
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double w_y = w[k] / w_sum;
        if (w_y == 0.0) {
          continue;
        }
        const std::size_t y = cand[k];
        if (y == x) {
          kernel.enumerated_stay[x] += q * w_y;
          continue;
        }
        auto visit = [&](double ref_prob) {
          double ref_sum = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            ref_sum += model.weight(i, refs[i], y);
          }
          const double w_x = model.weight(k, x, y) / ref_sum;
          const TransitionContext ctx{model, x, y, k, cand, refs, w_x, w_y};
          const double alpha = override_alpha ? override_alpha(ctx) : standard_alpha(model, adapters, ctx);
          const double mass = q * w_y * ref_prob;
          kernel.transition(x, y) += mass * alpha;
          kernel.enumerated_stay[x] += mass * (1.0 - alpha);
        };
        if (!draws_references) {
          refs = cand;
          refs[k] = x;
          visit(1.0);
          continue;
        }
        std::fill(free_refs.begin(), free_refs.end(), 0);
        do {
          double r = 1.0;
          for (std::size_t i = 0, f = 0; i < n; ++i) {
            if (i == k) {
              refs[i] = x;
            } else {
              refs[i] = free_refs[f++];
              r *= model.proposals[i](y, refs[i]);
            }
          }
          if (r != 0.0) {
            visit(r);
          }
        } while (next_tuple(free_refs, m));
      }
    } while (next_tuple(cand, m));

    double off = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      if (y != x) {
        off += kernel.transition(x, y);
      }
    }
    kernel.transition(x, x) = 1.0 - off;
  }
  return kernel;
}

double check_detailed_balance(const KernelMatrix& kernel, std::span<const double> target_mass) {
  const std::size_t m = kernel.size();
  if (target_mass.size() != m) {
    throw ContractViolation("target mass does not match the kernel size");
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (x == y) {
        continue;
      }
      const double a = target_mass[x] * kernel.transition(x, y);
      const double b = target_mass[y] * kernel.transition(y, x);
      worst = std::max(worst, std::abs(a - b) / std::max({a, b, 1e-300}));
    }
  }
  return worst;
}

double stationarity_error(const KernelMatrix& kernel, std::span<const double> target_mass) {
  const std::size_t m = kernel.size();
  if (target_mass.size() != m) {
    throw ContractViolation("target mass does not match the kernel size");
  }
  double z = 0.0;
  for (double p : target_mass) {
    z += p;
  }
  double worst = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
      s += target_mass[x] / z * kernel.transition(x, y);
    }
    worst = std::max(worst, std::abs(s - target_mass[y] / z));
  }
  return worst;
}

FiniteModel random_finite_model(const RandomModelOptions& options, AcceptanceRule acceptance, RngStream& rng) {
  const std::size_t m = options.states;
  const std::size_t n = options.tries;
  if (m < 2 || n < 1) {
    throw ContractViolation("random finite model needs at least two states and one try");
  }
  FiniteModel model;
  model.acceptance = std::move(acceptance);
  for (std::size_t i = 0; i < m; ++i) {
    model.target_mass.push_back(0.1 + 0.9 * rng.uniform());
  }

  auto random_table = [&] {
    SquareMatrix t(m);
    std::vector<double> shared_row(m);
    for (std::size_t r = 0; r < m; ++r) {
      if (!options.independent || r == 0) {
        double s = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
          shared_row[c] = 0.05 + rng.uniform();
          s += shared_row[c];
        }
        for (double& v : shared_row) {
          v /= s;
        }
      }
      for (std::size_t c = 0; c < m; ++c) {
        t(r, c) = shared_row[c];
      }
    }
    return t;
  };
  for (std::size_t j = 0; j < n; ++j) {
    model.proposals.push_back(options.heterogeneous || j == 0 ? random_table() : model.proposals.front());
  }

  if (options.weights == FiniteWeightStyle::random) {
    std::vector<SquareMatrix> tables;
    for (std::size_t j = 0; j < n; ++j) {
      SquareMatrix w(m);
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t d = 0; d < m; ++d) {
          w(c, d) = 0.1 + 1.9 * rng.uniform();
        }
      }
      tables.push_back(std::move(w));
    }
    model.weight = [tables = std::move(tables)](std::size_t j, std::size_t c, std::size_t d) { return tables[j](c, d); };
  } else {
    model.weight = [mass = model.target_mass, props = model.proposals](std::size_t j, std::size_t c, std::size_t d) {
      return mass[c] / props[j](d, c);
    };
  }
  return model;
}

FiniteTarget::FiniteTarget(std::vector<double> mass) {
  for (double p : mass) {
    log_mass_.push_back(p > 0.0 ? std::log(p) : kNegInf);
  }
}

double FiniteTarget::do_log_density(Point x) const { return log_mass_[finite_index(x, log_mass_.size())]; }

FiniteProposal::FiniteProposal(SquareMatrix table) : table_{std::move(table)}, independent_{true} {
  for (std::size_t r = 1; r < table_.size() && independent_; ++r) {
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (table_(r, c) != table_(0, c)) {
        independent_ = false;
        break;
      }
    }
  }
}

void FiniteProposal::do_sample(Point condition, RngStream& rng, std::span<double> out) const {
  const std::size_t d = finite_index(condition, table_.size());
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = table_.size() - 1;
  for (std::size_t c = 0; c < table_.size(); ++c) {
    acc += table_(d, c);
    if (u < acc) {
      pick = c;
      break;
    }
  }
  out[0] = static_cast<double>(pick);
}

double FiniteProposal::do_log_density(Point candidate, Point condition) const {
  const double p = table_(finite_index(condition, table_.size()), finite_index(candidate, table_.size()));
  return p > 0.0 ? std::log(p) : kNegInf;
}

std::size_t finite_index(Point p, std::size_t states) {
  if (p.size() != 1) {
    throw ContractViolation("finite-model points are one-dimensional");
  }
  const double v = p[0];
  const double r = std::round(v);
  if (r != v || r < 0.0 || r >= static_cast<double>(states)) {
    throw ContractViolation("point does not encode a finite-model state");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace mtm
