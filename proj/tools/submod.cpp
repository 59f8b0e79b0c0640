// Copyright 2026 The submodkit Authors.
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

// Command-line front end: submod {greedy|bnb|verify|gen} [flags].

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "submod/cli.hpp"

namespace {

using submod::cli::RunConfig;

void add_shared(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--instance", cfg.instance, "Instance file");
  cmd.add_option("--objective", cfg.objective, "coverage, modular or influence")
      ->check(CLI::IsMember({"coverage", "modular", "influence"}));
  cmd.add_option("--budgets", cfg.budgets, "Comma-separated budgets")
      ->delimiter(',');
  cmd.add_option("--seed", cfg.seeds, "Comma-separated seeds")->delimiter(',');
  cmd.add_option("--out", cfg.out, "Output path (default: stdout)");
  cmd.add_option("--costs", cfg.costs, "Cost file overriding built-in costs");
  cmd.add_option("--weights", cfg.weights, "Modular weights file");
  cmd.add_option("--R", cfg.ensemble_size, "Live-edge ensemble size");
  cmd.add_option("--nV", cfg.n_objects, "Generated objects / elements");
  cmd.add_option("--nW", cfg.n_words, "Generated words");
  cmd.add_option("--p", cfg.p, "Generated edge probability");
  cmd.add_option("--vertices", cfg.vertices, "Generated graph vertices");
  cmd.add_option("--degree", cfg.degree, "Generated links per vertex");
  cmd.add_option("--gamma", cfg.gamma, "Cost per unit of out-degree");
  cmd.add_option("--c-min", cfg.c_min, "Minimum vertex cost");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Monotone submodular maximization under a knapsack constraint"};
  app.set_config("--config", "", "Key-value config file; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  CLI::App* greedy = app.add_subcommand("greedy", "Greedy runs with bounds");
  add_shared(*greedy, cfg);

  CLI::App* bnb = app.add_subcommand("bnb", "Exact branch-and-bound");
  add_shared(*bnb, cfg);
  bnb->add_option("--strategy", cfg.strategy, "lambda, dca or both")
      ->check(CLI::IsMember({"lambda", "dca", "both"}));
  bnb->add_option("--node-cap", cfg.node_cap, "Node budget per run");

  CLI::App* verify = app.add_subcommand("verify", "Verification suite");
  verify->add_option("--seed", cfg.seeds, "Seed")->delimiter(',');
  verify->add_option("--samples", cfg.samples, "Samples per program");
  verify->add_option("--instances", cfg.instances, "Suite size");
  verify->add_option("--out", cfg.out, "Summary CSV path");
  verify->add_option("--report", cfg.report, "Per-inequality report path");
  verify->add_option("--inject-fault", cfg.inject_fault,
                     "Deliberate bug for mutation testing: no-fractional");

  CLI::App* gen = app.add_subcommand("gen", "Write a generated instance");
  add_shared(*gen, cfg);
  gen->add_option("--kind", cfg.kind, "bipartite, graph or modular")
      ->check(CLI::IsMember({"bipartite", "graph", "modular"}));
  gen->add_option("--costs-out", cfg.costs_out, "Degree cost file (graph)");
  gen->add_flag("--overwrite", cfg.overwrite, "Replace existing output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return submod::cli::kInvalidConfig;
  }
  for (CLI::App* sub : {greedy, bnb, verify, gen})
    if (sub->parsed()) cfg.command = sub->get_name();
  return submod::cli::run(cfg);
}
