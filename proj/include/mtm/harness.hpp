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

#ifndef MTM_HARNESS_HPP
#define MTM_HARNESS_HPP

/// \file
/// Experiment configuration, replicated runs and table output.
///
/// Config files are flat `key = value` lines; `#` starts a comment. Keys:
///
///   label             free text for the technique column
///   target            bimodal | levy(eta,nu) | smiling_face | smiling_face_transposed
///   proposals         `;`-separated groups `id(args)[*count]`, e.g.
///                     `ind_gauss(-10,10)*50; ind_gauss(2,10)*50`
///   tries             comma list of N, swept one row each (single group
///                     without a count only)
///   weight            weight preset id; weight.theta, weight.lambda
///                     (one | gauss(s))
///   acceptance        generalized | noref | composed; acceptance.beta,
///                     acceptance.gamma, acceptance.lambda for composed
///   iterations, replications, seed
///   statistics        comma list of accept_rate, lag1_corr, mode_jump_rate,
///                     normconst_recip, sel_rate
///   init              comma list of coordinates
///   output            CSV path (the command line wins)

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtm/acceptance.hpp"
#include "mtm/diagnostics.hpp"
#include "mtm/models.hpp"
#include "mtm/sampler.hpp"

namespace mtm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `name(a, b, ...)` or a bare `name`.
struct CallSpec {
  std::string name;
  std::vector<double> args;
};

CallSpec parse_call(const std::string& text);

struct ProposalGroup {
  CallSpec proposal;
  std::size_t count = 0;  // 0: taken from the tries sweep
};

struct ExperimentConfig {
  std::string label = "MTM";
  std::string target = "bimodal";
  std::vector<ProposalGroup> proposals{{{"rw_gauss", {1.0}}, 0}};
  std::vector<std::size_t> tries{1};
  std::string weight = "importance";
  double weight_theta = 1.0;
  std::string weight_lambda = "one";
  std::string acceptance = "generalized";
  std::string beta = "beta1";
  std::string gamma = "gamma3";
  std::string acceptance_lambda = "one";
  std::size_t iterations = 5000;
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> statistics{"accept_rate", "lag1_corr"};
  std::vector<double> init;  // empty: target default
  std::string output;

  /// Throws ConfigError naming the offending key and the valid choices.
  void validate() const;
};

/// Parses the key = value format. Unknown keys and malformed values throw
/// ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::vector<std::string> target_ids();
std::vector<std::string> proposal_ids();
std::vector<std::string> statistic_ids();

std::unique_ptr<TargetDensity> make_target(const CallSpec& spec);
std::shared_ptr<const ConditionalProposal> make_proposal(const CallSpec& spec, std::size_t dimension);
LogLambda make_lambda(const std::string& text);

/// Default initial state: 0 for bimodal, 2 for Levy, (0, 27) for the
/// smiling face.
std::vector<double> default_init(const std::string& target);

struct TableRow {
  std::vector<std::string> keys;
  AggregateSummary summary;
};

struct Table {
  std::string id;
  std::vector<std::string> key_columns{"technique", "N", "weight", "alpha"};
  std::vector<TableRow> rows;
  std::vector<std::string> warnings;

  /// Statistic names in order of first appearance across rows.
  [[nodiscard]] std::vector<std::string> statistic_names() const;
  /// Row whose key columns match `keys` (prefix match), or nullptr.
  [[nodiscard]] const TableRow* find_row(const std::vector<std::string>& keys) const;
};

struct RunOptions {
  std::size_t workers = 1;
};

/// Worker count from MTM_WORKERS, else 1.
std::size_t default_workers();

/// Everything needed to run one row.
struct RowPlan {
  std::string technique;
  std::shared_ptr<const TargetDensity> target;
  SamplerConfig sampler;
  std::vector<std::size_t> group_sizes;
  std::vector<double> init;
  std::size_t iterations = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> statistics;
};

/// One plan per entry of the tries sweep.
std::vector<RowPlan> plan_rows(const ExperimentConfig& cfg);

/// Runs R chains with streams 0..R-1 of the plan seed and summarizes each.
/// Results are indexed by replication, independent of the worker count.
std::vector<RunSummary> run_replications(const RowPlan& plan, const RunOptions& options);

/// Replication r's chain (RecordDetail as configured in the plan).
ChainTrace run_single(const RowPlan& plan, std::size_t replication);

/// Summary of one chain restricted to the requested statistics. Statistics
/// that make no sense for the target are left empty.
RunSummary summarize(const ChainTrace& trace, const RowPlan& plan);

TableRow run_row(const RowPlan& plan, const RunOptions& options, std::vector<std::string>* warnings = nullptr);

Table run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::vector<std::string> table_ids();

/// Configurations behind each reproducible table (t2..t10).
std::vector<ExperimentConfig> table_configs(const std::string& table_id, std::size_t replications,
                                            std::uint64_t seed);

Table reproduce_table(const std::string& table_id, std::size_t replications, std::uint64_t seed,
                      const RunOptions& options = {});

/// Parameters of each table, flattened to `key = value` pairs for comparison
/// with the checked-in manifest.
std::map<std::string, std::string> table_parameters(const std::string& table_id);

/// Header row plus one line per row; statistic columns `<name>_mean`,
/// `<name>_std`; 6 significant digits; empty cells for undefined values.
void emit_csv(const Table& table, std::ostream& out);
void emit_csv(const Table& table, const std::string& path);

/// One line per state: coordinates then the accept flag of the step that
/// produced it (0 for the initial state).
void dump_samples(const ChainTrace& trace, std::ostream& out);
void dump_samples(const ChainTrace& trace, const std::string& path);

/// printf("%.6g") in the C locale.
std::string format_g6(double v);

}  // namespace mtm

#endif  // MTM_HARNESS_HPP
