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

// Command-line front end: run, table, oracle, dump.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mtm/harness.hpp"
#include "mtm/oracle.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;
constexpr double kBalanceTolerance = 1e-10;

void print_warnings(const mtm::Table& table) {
  for (const auto& w : table.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

void write_table(const mtm::Table& table, const std::string& out) {
  print_warnings(table);
  if (out.empty()) {
    mtm::emit_csv(table, std::cout);
  } else {
    mtm::emit_csv(table, out);
  }
}

mtm::AcceptanceRule oracle_rule(const std::string& variant, const std::string& beta, const std::string& gamma) {
  if (variant == "generalized") {
    return mtm::AcceptanceRule::generalized();
  }
  if (variant == "noref") {
    return mtm::AcceptanceRule::noref();
  }
  return mtm::AcceptanceRule::composed(mtm::beta_from_id(beta, mtm::lambda_one()), mtm::gamma_from_id(gamma));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-try Metropolis experiments"};
  app.require_subcommand(1);

  std::optional<std::size_t> workers_flag;
  std::string out_path;

  auto* run = app.add_subcommand("run", "Run an experiment config and write a CSV table");
  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::size_t> runs_flag;
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out", out_path, "CSV output (default: config output, else stdout)");
  run->add_option("--seed", seed_flag, "Base seed");
  run->add_option("--runs", runs_flag, "Replications")->check(CLI::PositiveNumber);
  run->add_option("--workers", workers_flag, "Worker threads")->check(CLI::PositiveNumber);

  auto* table = app.add_subcommand("table", "Reproduce one of the built-in tables");
  std::string table_id;
  std::size_t table_runs = 200;
  std::uint64_t table_seed = 1;
  table->add_option("--id", table_id, "Table id")->required()->check(CLI::IsMember(mtm::table_ids()));
  table->add_option("--runs", table_runs, "Replications")->check(CLI::PositiveNumber);
  table->add_option("--seed", table_seed, "Base seed");
  table->add_option("--out", out_path, "CSV output (default stdout)");
  table->add_option("--workers", workers_flag, "Worker threads")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Check detailed balance on random finite models");
  std::size_t states = 4;
  std::size_t tries = 2;
  std::size_t battery = 50;
  std::string variant = "generalized";
  std::string beta = "beta1";
  std::string gamma = "gamma3";
  std::uint64_t oracle_seed = 1;
  bool homogeneous = false;
  oracle->add_option("--states", states, "States M")->check(CLI::Range(2, 8));
  oracle->add_option("--tries", tries, "Tries N")->check(CLI::Range(1, 3));
  oracle->add_option("--variant", variant, "Acceptance variant")
      ->check(CLI::IsMember({"generalized", "noref", "beta-gamma"}));
  oracle->add_option("--beta", beta, "Beta factor for beta-gamma")->check(CLI::IsMember(mtm::beta_ids()));
  oracle->add_option("--gamma", gamma, "Gamma factor for beta-gamma")->check(CLI::IsMember(mtm::gamma_ids()));
  oracle->add_option("--battery", battery, "Number of random models")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "Seed");
  oracle->add_flag("--homogeneous", homogeneous, "Same proposal table for every try");

  auto* dump = app.add_subcommand("dump", "Write one chain of a config as plot-ready samples");
  std::size_t steps = 500;
  std::size_t replication = 0;
  dump->add_option("--config", config_path, "Config file")->required();
  dump->add_option("--steps", steps, "Chain length")->required()->check(CLI::PositiveNumber);
  dump->add_option("--out", out_path, "Output path")->required();
  dump->add_option("--replication", replication, "Stream index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  mtm::RunOptions options{workers_flag.value_or(mtm::default_workers())};

  try {
    if (*run) {
      mtm::ExperimentConfig cfg = mtm::load_config(config_path);
      if (seed_flag) {
        cfg.seed = *seed_flag;
      }
      if (runs_flag) {
        cfg.replications = *runs_flag;
      }
      write_table(mtm::run_experiment(cfg, options), out_path.empty() ? cfg.output : out_path);
    } else if (*table) {
      write_table(mtm::reproduce_table(table_id, table_runs, table_seed, options), out_path);
    } else if (*oracle) {
      mtm::RngStream rng(oracle_seed, 0);
      mtm::RandomModelOptions opts;
      opts.states = states;
      opts.tries = tries;
      opts.heterogeneous = !homogeneous;
      double worst = 0.0;
      for (std::size_t b = 0; b < battery; ++b) {
        const auto model = mtm::random_finite_model(opts, oracle_rule(variant, beta, gamma), rng);
        const auto kernel = mtm::exact_kernel(model);
        worst = std::max(worst, mtm::check_detailed_balance(kernel, model.target_mass));
      }
      std::printf("variant=%s states=%zu tries=%zu battery=%zu max_violation=%.3e\n",
                  variant == "beta-gamma" ? (beta + "*" + gamma).c_str() : variant.c_str(), states, tries, battery,
                  worst);
      if (!(worst <= kBalanceTolerance)) {
        std::fprintf(stderr, "detailed balance violated above %.0e\n", kBalanceTolerance);
        return kExitViolation;
      }
    } else if (*dump) {
      const mtm::ExperimentConfig cfg = mtm::load_config(config_path);
      auto plan = mtm::plan_rows(cfg).front();
      plan.iterations = steps;
      mtm::dump_samples(mtm::run_single(plan, replication), out_path);
    }
  } catch (const mtm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
