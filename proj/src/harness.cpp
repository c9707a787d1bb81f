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

#include "mtm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace mtm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    out.push_back(trim(cur));
  }
  if (!s.empty() && s.back() == sep) {
    out.emplace_back();
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? sep : "") + parts[i];
  }
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

template <typename T>
T parse_unsigned(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(what + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::string one_of(const std::vector<std::string>& ids) { return "expected one of: " + join(ids, ", "); }

template <typename Fn>
auto as_config_error(const std::string& key, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string call_text(const CallSpec& c) {
  if (c.args.empty()) {
    return c.name;
  }
  std::vector<std::string> a;
  for (double v : c.args) {
    a.push_back(format_g6(v));
  }
  return c.name + "(" + join(a, ",") + ")";
}

std::string proposals_text(const std::vector<ProposalGroup>& groups) {
  std::vector<std::string> parts;
  for (const auto& g : groups) {
    parts.push_back(call_text(g.proposal) + (g.count ? "*" + std::to_string(g.count) : ""));
  }
  return join(parts, "; ");
}

std::string weight_text(const ExperimentConfig& cfg) {
  if (cfg.weight == "target_power") {
    return cfg.weight + "(" + format_g6(cfg.weight_theta) + ")";
  }
  if (cfg.weight == "lambda_form") {
    return cfg.weight + "(" + cfg.weight_lambda + ")";
  }
  return cfg.weight;
}

AcceptanceRule make_acceptance(const ExperimentConfig& cfg) {
  if (cfg.acceptance == "generalized") {
    return AcceptanceRule::generalized();
  }
  if (cfg.acceptance == "noref") {
    return AcceptanceRule::noref();
  }
  if (cfg.acceptance == "composed") {
    auto beta = as_config_error("acceptance.beta",
                                [&] { return beta_from_id(cfg.beta, make_lambda(cfg.acceptance_lambda)); });
    auto gamma = as_config_error("acceptance.gamma", [&] { return gamma_from_id(cfg.gamma); });
    return AcceptanceRule::composed(std::move(beta), gamma);
  }
  throw ConfigError("acceptance: unknown id '" + cfg.acceptance + "', " +
                    one_of({"generalized", "noref", "composed"}));
}

bool wants(const std::vector<std::string>& stats, const std::string& name) {
  return std::find(stats.begin(), stats.end(), name) != stats.end();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

}  // namespace

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CallSpec parse_call(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) {
    if (t.empty() || t.find(')') != std::string::npos) {
      throw ConfigError("malformed identifier '" + text + "'");
    }
    return {t, {}};
  }
  if (t.back() != ')' || open == 0) {
    throw ConfigError("malformed call '" + text + "'");
  }
  CallSpec c{trim(t.substr(0, open)), {}};
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  if (!trim(inner).empty()) {
    for (const auto& a : split(inner, ',')) {
      c.args.push_back(parse_double(a, c.name));
    }
  }
  return c;
}

std::vector<std::string> target_ids() { return {"bimodal", "levy", "smiling_face", "smiling_face_transposed"}; }

std::vector<std::string> proposal_ids() { return {"rw_gauss", "ind_gauss", "ind_uniform"}; }

std::vector<std::string> statistic_ids() {
  return {"accept_rate", "lag1_corr", "mode_jump_rate", "normconst_recip", "sel_rate"};
}

std::unique_ptr<TargetDensity> make_target(const CallSpec& spec) {
  auto arity = [&](std::size_t n) {
    if (spec.args.size() != n) {
      throw ConfigError("target " + spec.name + " takes " + std::to_string(n) + " argument(s)");
    }
  };
  if (spec.name == "bimodal") {
    arity(0);
    return std::make_unique<BimodalQuartic>();
  }
  if (spec.name == "levy") {
    arity(2);
    return as_config_error("target", [&] { return std::make_unique<LevyDensity>(spec.args[0], spec.args[1]); });
  }
  if (spec.name == "smiling_face") {
    arity(0);
    return std::make_unique<SmilingFace>(BananaForm::printed);
  }
  if (spec.name == "smiling_face_transposed") {
    arity(0);
    return std::make_unique<SmilingFace>(BananaForm::transposed);
  }
  throw ConfigError("target: unknown id '" + spec.name + "', " + one_of(target_ids()));
}

std::shared_ptr<const ConditionalProposal> make_proposal(const CallSpec& spec, std::size_t dimension) {
  return as_config_error("proposals", [&]() -> std::shared_ptr<const ConditionalProposal> {
    if (spec.name == "rw_gauss") {
      if (spec.args.size() != 1) {
        throw ConfigError("proposals: rw_gauss takes (sigma)");
      }
      return std::make_shared<GaussianRandomWalk>(spec.args[0], dimension);
    }
    if (spec.name == "ind_gauss") {
      const std::size_t n = spec.args.size();
      if (n == 2) {
        return std::make_shared<IndependentGaussian>(std::vector<double>(dimension, spec.args[0]), spec.args[1]);
      }
      if (n == dimension + 1) {
        return std::make_shared<IndependentGaussian>(std::vector<double>(spec.args.begin(), spec.args.end() - 1),
                                                     spec.args.back());
      }
      throw ConfigError("proposals: ind_gauss takes (mu, sigma) or one mean per coordinate then sigma");
    }
    if (spec.name == "ind_uniform") {
      if (spec.args.size() != 2 || dimension != 1) {
        throw ConfigError("proposals: ind_uniform takes (lower, upper) on a 1-D target");
      }
      return std::make_shared<IndependentUniform>(spec.args[0], spec.args[1]);
    }
    throw ConfigError("proposals: unknown id '" + spec.name + "', " + one_of(proposal_ids()));
  });
}

LogLambda make_lambda(const std::string& text) {
  const CallSpec c = parse_call(text);
  if (c.name == "one" && c.args.empty()) {
    return lambda_one();
  }
  if (c.name == "gauss" && c.args.size() == 1) {
    return as_config_error("lambda", [&] { return lambda_gauss(c.args[0]); });
  }
  throw ConfigError("lambda: unknown form '" + text + "', " + one_of({"one", "gauss(s)"}));
}

std::vector<double> default_init(const std::string& target) {
  const CallSpec c = parse_call(target);
  if (c.name == "levy") {
    return {2.0};
  }
  if (c.name == "smiling_face" || c.name == "smiling_face_transposed") {
    return {0.0, 27.0};
  }
  return {0.0};
}

void ExperimentConfig::validate() const {
  const auto tgt = make_target(parse_call(target));
  if (proposals.empty()) {
    throw ConfigError("proposals: at least one proposal is required");
  }
  const bool counted = proposals.front().count > 0;
  for (const auto& g : proposals) {
    (void)make_proposal(g.proposal, tgt->dimension());
    if ((g.count > 0) != counted) {
      throw ConfigError("proposals: either every group has a *count or none does");
    }
  }
  if (counted && !tries.empty()) {
    throw ConfigError("tries: not allowed when proposal groups carry counts");
  }
  if (!counted && proposals.size() > 1) {
    throw ConfigError("proposals: several groups need a *count each");
  }
  for (std::size_t n : tries) {
    if (n == 0) {
      throw ConfigError("tries: N must be at least 1");
    }
  }
  const auto kind = as_config_error("weight", [&] {
    try {
      return weight_kind_from_id(weight);
    } catch (const std::invalid_argument&) {
      throw ConfigError("weight: unknown id '" + weight + "', " + one_of(weight_ids()));
    }
  });
  as_config_error("weight", [&] { return make_weight(kind, weight_theta, make_lambda(weight_lambda)); });
  (void)make_acceptance(*this);
  if (iterations == 0) {
    throw ConfigError("iterations: must be at least 1");
  }
  if (replications == 0) {
    throw ConfigError("replications: must be at least 1");
  }
  for (const auto& s : statistics) {
    if (!wants(statistic_ids(), s)) {
      throw ConfigError("statistics: unknown id '" + s + "', " + one_of(statistic_ids()));
    }
  }
  const std::vector<double> x0 = init.empty() ? default_init(target) : init;
  if (x0.size() != tgt->dimension()) {
    throw ConfigError("init: expected " + std::to_string(tgt->dimension()) + " coordinate(s)");
  }
  if (tgt->log_density(x0) == kNegInf) {
    throw ConfigError("init: initial state has zero target density");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.tries.clear();
  const std::vector<std::string> keys{"label",           "target",           "proposals",
                                      "tries",           "weight",           "weight.theta",
                                      "weight.lambda",   "acceptance",       "acceptance.beta",
                                      "acceptance.gamma", "acceptance.lambda", "iterations",
                                      "replications",    "seed",             "statistics",
                                      "init",            "output"};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "label") {
      cfg.label = value;
    } else if (key == "target") {
      cfg.target = value;
    } else if (key == "proposals") {
      cfg.proposals.clear();
      for (const auto& part : split(value, ';')) {
        ProposalGroup g;
        const auto star = part.rfind('*');
        if (star != std::string::npos && part.find(')', star) == std::string::npos) {
          g.count = parse_unsigned<std::size_t>(part.substr(star + 1), "proposals");
          if (g.count == 0) {
            throw ConfigError("proposals: a group count must be positive");
          }
          g.proposal = parse_call(part.substr(0, star));
        } else {
          g.proposal = parse_call(part);
        }
        cfg.proposals.push_back(std::move(g));
      }
    } else if (key == "tries") {
      cfg.tries.clear();
      for (const auto& t : split(value, ',')) {
        cfg.tries.push_back(parse_unsigned<std::size_t>(t, "tries"));
      }
    } else if (key == "weight") {
      cfg.weight = value;
    } else if (key == "weight.theta") {
      cfg.weight_theta = parse_double(value, key);
    } else if (key == "weight.lambda") {
      cfg.weight_lambda = value;
    } else if (key == "acceptance") {
      cfg.acceptance = value;
    } else if (key == "acceptance.beta") {
      cfg.beta = value;
    } else if (key == "acceptance.gamma") {
      cfg.gamma = value;
    } else if (key == "acceptance.lambda") {
      cfg.acceptance_lambda = value;
    } else if (key == "iterations") {
      cfg.iterations = parse_unsigned<std::size_t>(value, key);
    } else if (key == "replications") {
      cfg.replications = parse_unsigned<std::size_t>(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_unsigned<std::uint64_t>(value, key);
    } else if (key == "statistics") {
      cfg.statistics = split(value, ',');
    } else if (key == "init") {
      cfg.init.clear();
      for (const auto& v : split(value, ',')) {
        cfg.init.push_back(parse_double(v, key));
      }
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "', " + one_of(keys));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

std::vector<std::string> Table::statistic_names() const {
  std::vector<std::string> names;
  for (const auto& row : rows) {
    for (const auto& s : row.summary.statistics) {
      if (!wants(names, s.name)) {
        names.push_back(s.name);
      }
    }
  }
  return names;
}

const TableRow* Table::find_row(const std::vector<std::string>& keys) const {
  for (const auto& row : rows) {
    if (keys.size() <= row.keys.size() && std::equal(keys.begin(), keys.end(), row.keys.begin())) {
      return &row;
    }
  }
  return nullptr;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("MTM_WORKERS")) {
    std::size_t v = 0;
    const std::string s{env};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) {
      return v;
    }
  }
  return 1;
}

std::vector<RowPlan> plan_rows(const ExperimentConfig& cfg) {
  cfg.validate();
  std::shared_ptr<const TargetDensity> target = make_target(parse_call(cfg.target));
  const WeightFunction weight = make_weight(weight_kind_from_id(cfg.weight), cfg.weight_theta,
                                            make_lambda(cfg.weight_lambda));
  const AcceptanceRule acceptance = make_acceptance(cfg);
  const std::vector<double> init = cfg.init.empty() ? default_init(cfg.target) : cfg.init;

  auto base = [&] {
    return RowPlan{cfg.label, target, SamplerConfig{{}, weight, acceptance, RecordDetail::summary},
                   {},        init,   cfg.iterations, cfg.replications,
                   cfg.seed,  cfg.statistics};
  };

  std::vector<RowPlan> plans;
  if (cfg.proposals.front().count > 0) {
    RowPlan p = base();
    for (const auto& g : cfg.proposals) {
      const auto prop = make_proposal(g.proposal, target->dimension());
      const auto rep = repeat_proposal(prop, g.count);
      p.sampler.proposals.insert(p.sampler.proposals.end(), rep.begin(), rep.end());
      p.group_sizes.push_back(g.count);
    }
    plans.push_back(std::move(p));
    return plans;
  }
  const auto prop = make_proposal(cfg.proposals.front().proposal, target->dimension());
  const std::vector<std::size_t> tries = cfg.tries.empty() ? std::vector<std::size_t>{1} : cfg.tries;
  for (std::size_t n : tries) {
    RowPlan p = base();
    p.sampler.proposals = repeat_proposal(prop, n);
    p.group_sizes = {n};
    plans.push_back(std::move(p));
  }
  return plans;
}

ChainTrace run_single(const RowPlan& plan, std::size_t replication) {
  RngStream rng(plan.seed, replication);
  return run_chain(plan.init, plan.sampler, *plan.target, plan.iterations, rng);
}

RunSummary summarize(const ChainTrace& trace, const RowPlan& plan) {
  RunSummary s;
  s.acceptance_rate = acceptance_rate(trace);
  const TargetDensity& target = *plan.target;
  if (wants(plan.statistics, "lag1_corr") && target.has_moments()) {
    for (std::size_t i = 0; i < target.dimension(); ++i) {
      s.lag1_corr.push_back(lag1_correlation(trace, i));
    }
  }
  if (wants(plan.statistics, "mode_jump_rate") && target.component_count() > 0) {
    s.mode_jump_rate = mode_jump_rate(trace, [&target](Point x) { return mode_index(target, x); });
    if (*s.mode_jump_rate > s.acceptance_rate + 1e-12) {
      throw ContractViolation("mode-jump rate exceeds the acceptance rate");
    }
  }
  if (wants(plan.statistics, "normconst_recip")) {
    s.normconst = normconst_estimate(trace.records);
  }
  if (wants(plan.statistics, "sel_rate")) {
    s.selection_rates = selection_rates(trace.records, plan.group_sizes);
  }
  return s;
}

std::vector<RunSummary> run_replications(const RowPlan& plan, const RunOptions& options) {
  std::vector<RunSummary> out(plan.replications);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t r = next++; r < plan.replications; r = next++) {
      try {
        out[r] = summarize(run_single(plan, r), plan);
      } catch (...) {
        const std::lock_guard lock{failure_mutex};
        if (!failure) {
          failure = std::current_exception();
        }
        next = plan.replications;
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, plan.replications);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

TableRow run_row(const RowPlan& plan, const RunOptions& options, std::vector<std::string>* warnings) {
  const auto summaries = run_replications(plan, options);
  TableRow row;
  row.keys = {plan.technique, std::to_string(plan.sampler.tries()), plan.sampler.weight.label(),
              plan.sampler.acceptance.id()};
  row.summary = aggregate(summaries);
  // named_statistics always carries these two; drop them unless requested.
  const bool keep_jumps = wants(plan.statistics, "mode_jump_rate") && plan.target->component_count() > 0;
  const bool keep_normconst = wants(plan.statistics, "normconst_recip");
  std::erase_if(row.summary.statistics, [&](const NamedStatistic& s) {
    return (s.name == "mode_jump_rate" && !keep_jumps) || (s.name == "normconst_recip" && !keep_normconst);
  });
  if (warnings) {
    const std::string where = plan.technique + " N=" + std::to_string(plan.sampler.tries());
    if (wants(plan.statistics, "lag1_corr") && !plan.target->has_moments()) {
      warnings->push_back(where + ": lag1_corr omitted, " + plan.target->name() + " has no moments");
    }
    if (wants(plan.statistics, "mode_jump_rate") && plan.target->component_count() == 0) {
      warnings->push_back(where + ": mode_jump_rate omitted, " + plan.target->name() + " has no components");
    }
    for (const auto& s : row.summary.statistics) {
      if (!s.value) {
        warnings->push_back(where + ": " + s.name + " undefined in at least one run");
      }
    }
  }
  return row;
}

Table run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  Table table;
  table.id = cfg.label;
  for (const auto& plan : plan_rows(cfg)) {
    table.rows.push_back(run_row(plan, options, &table.warnings));
  }
  return table;
}

std::vector<std::string> table_ids() { return {"t2", "t3", "t4", "t5", "t6", "t7", "t8", "t9", "t10"}; }

std::vector<ExperimentConfig> table_configs(const std::string& table_id, std::size_t replications,
                                            std::uint64_t seed) {
  auto make = [&](std::string label) {
    ExperimentConfig c;
    c.label = std::move(label);
    c.replications = replications;
    c.seed = seed;
    c.tries.clear();
    return c;
  };
  auto rw = [](double sigma) { return std::vector<ProposalGroup>{{{"rw_gauss", {sigma}}, 0}}; };
  std::vector<ExperimentConfig> out;

  if (table_id == "t2" || table_id == "t3") {
    const double sigma = table_id == "t2" ? 2.0 : 10.0;
    auto mh = make("MH");
    mh.proposals = rw(sigma);
    mh.tries = {1};
    auto gen = make("MTM-rw");
    gen.proposals = rw(sigma);
    gen.tries = {2, 5, 100, 1000};
    auto noref = make("MTM-without");
    noref.proposals = rw(sigma);
    noref.tries = {2, 5, 100, 1000};
    noref.acceptance = "noref";
    out = {mh, gen, noref};
  } else if (table_id == "t4") {
    for (const auto& w : {"importance", "target", "constant", "sqrt_target", "target_sq", "target_cube",
                          "reverse_proposal", "inv_proposal", "target_times_reverse"}) {
      auto c = make("MTM-rw");
      c.proposals = rw(10.0);
      c.tries = {100};
      c.weight = w;
      out.push_back(c);
    }
    auto mh = make("MH");
    mh.proposals = rw(10.0);
    mh.tries = {1};
    out.push_back(mh);
  } else if (table_id == "t5") {
    // Independent proposals reuse the candidates as reference points.
    for (const auto& w : {"importance", "target"}) {
      auto c = make("MTM-rw");
      c.proposals = rw(10.0);
      c.tries = {100};
      c.weight = w;
      out.push_back(c);
    }
    for (const auto& w : {"importance", "target"}) {
      auto c = make("MTM-ind one proposal");
      c.proposals = {{{"ind_gauss", {0.0, 10.0}}, 100}};
      c.weight = w;
      c.acceptance = "noref";
      c.statistics.push_back("sel_rate");
      out.push_back(c);
    }
    for (const auto& w : {"importance", "target"}) {
      auto c = make("MTM-ind two proposals");
      c.proposals = {{{"ind_gauss", {-10.0, 10.0}}, 50}, {{"ind_gauss", {2.0, 10.0}}, 50}};
      c.weight = w;
      c.acceptance = "noref";
      c.statistics.push_back("sel_rate");
      out.push_back(c);
    }
  } else if (table_id == "t6") {
    const std::vector<std::pair<std::string, CallSpec>> rows{{"MTM-ind mu=10", {"ind_gauss", {10.0, 50.0}}},
                                                             {"MTM-ind mu=100", {"ind_gauss", {100.0, 50.0}}},
                                                             {"MTM-rw", {"rw_gauss", {50.0}}}};
    for (const auto& [label, prop] : rows) {
      auto c = make(label);
      c.target = "levy(0,2)";
      c.proposals = {{prop, 0}};
      c.tries = {1000};
      c.statistics = {"accept_rate", "normconst_recip"};
      out.push_back(c);
    }
  } else if (table_id == "t7" || table_id == "t8") {
    const std::size_t n = table_id == "t7" ? 10 : 100;
    const std::vector<std::pair<std::string, std::string>> compositions{
        {"beta1", "gamma1"}, {"beta1", "gamma2"}, {"beta1", "gamma3"}, {"beta2", "gamma3"}};
    for (const auto& [b, g] : compositions) {
      auto c = make("MTM-rw");
      c.proposals = rw(1.0);
      c.tries = {n};
      c.weight = "target_power";
      c.weight_theta = 0.5;
      c.acceptance = "composed";
      c.beta = b;
      c.gamma = g;
      out.push_back(c);
    }
    auto c = make("MTM-rw");
    c.proposals = rw(1.0);
    c.tries = {n};
    c.weight = "target_power";
    c.weight_theta = 0.5;
    out.push_back(c);
  } else if (table_id == "t9" || table_id == "t10") {
    auto c = make("MTM-rw");
    c.target = "smiling_face";
    c.proposals = rw(table_id == "t9" ? 5.0 : 10.0);
    c.tries = {1, 5, 100, 1000};
    c.iterations = 500;
    c.statistics = {"accept_rate", "mode_jump_rate", "lag1_corr"};
    out.push_back(c);
  } else {
    throw ConfigError("unknown table id '" + table_id + "', " + one_of(table_ids()));
  }
  return out;
}

Table reproduce_table(const std::string& table_id, std::size_t replications, std::uint64_t seed,
                      const RunOptions& options) {
  Table table;
  table.id = table_id;
  for (const auto& cfg : table_configs(table_id, replications, seed)) {
    for (const auto& plan : plan_rows(cfg)) {
      table.rows.push_back(run_row(plan, options, &table.warnings));
    }
  }
  return table;
}

std::map<std::string, std::string> table_parameters(const std::string& table_id) {
  std::map<std::string, std::string> out;
  const auto configs = table_configs(table_id, 1, 0);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& c = configs[i];
    const std::string p = table_id + "." + std::to_string(i) + ".";
    std::vector<std::string> tries;
    for (std::size_t n : c.tries) {
      tries.push_back(std::to_string(n));
    }
    std::vector<std::string> init;
    for (double v : c.init.empty() ? default_init(c.target) : c.init) {
      init.push_back(format_g6(v));
    }
    out[p + "label"] = c.label;
    out[p + "target"] = c.target;
    out[p + "proposals"] = proposals_text(c.proposals);
    out[p + "tries"] = join(tries, ",");
    out[p + "weight"] = weight_text(c);
    out[p + "acceptance"] = c.acceptance == "composed" ? c.beta + "*" + c.gamma : c.acceptance;
    out[p + "iterations"] = std::to_string(c.iterations);
    out[p + "init"] = join(init, ",");
    out[p + "statistics"] = join(c.statistics, ",");
  }
  return out;
}

void emit_csv(const Table& table, std::ostream& out) {
  const auto names = table.statistic_names();
  std::vector<std::string> header;
  for (const auto& k : table.key_columns) {
    header.push_back(csv_field(k));
  }
  for (const auto& n : names) {
    header.push_back(n + "_mean");
    header.push_back(n + "_std");
  }
  out << join(header, ",") << '\n';
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < table.key_columns.size(); ++i) {
      cells.push_back(i < row.keys.size() ? csv_field(row.keys[i]) : std::string{});
    }
    for (const auto& n : names) {
      const NamedStatistic* s = row.summary.find(n);
      if (s && s->value) {
        cells.push_back(format_g6(s->value->mean));
        cells.push_back(format_g6(s->value->std));
      } else {
        cells.emplace_back();
        cells.emplace_back();
      }
    }
    out << join(cells, ",") << '\n';
  }
}

void emit_csv(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  emit_csv(table, out);
  if (!out.flush()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

void dump_samples(const ChainTrace& trace, std::ostream& out) {
  char buf[64];
  for (std::size_t t = 0; t < trace.states.size(); ++t) {
    for (double v : trace.states[t]) {
      std::snprintf(buf, sizeof buf, "%.10g ", v);
      out << buf;
    }
    out << (t > 0 && trace.records[t - 1].accepted ? 1 : 0) << '\n';
  }
}

void dump_samples(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  dump_samples(trace, out);
  if (!out.flush()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace mtm
