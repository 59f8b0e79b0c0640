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

// Subcommand implementations behind the `submod` tool. Each command takes a
// fully parsed RunConfig and returns a process exit code; argument parsing
// lives in tools/submod.cpp.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "submod/analysis.hpp"
#include "submod/bounds.hpp"
#include "submod/core.hpp"
#include "submod/exact.hpp"
#include "submod/greedy.hpp"
#include "submod/io.hpp"
#include "submod/log.hpp"
#include "submod/objectives.hpp"
#include "submod/suite.hpp"

namespace submod::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUnreadableInstance = 2,
  kInvalidConfig = 3,
  kOutputExists = 4,
};

struct RunConfig {
  std::string command;

  // Instance source: a file, or a generator driven by the seeds below.
  std::string instance;
  std::string objective = "coverage";
  std::string costs;     // optional cost file overriding built-in costs
  std::string weights;   // modular weights file when no --instance is given

  std::vector<double> budgets;
  std::vector<std::uint64_t> seeds{0};
  std::string out;       // empty: standard output
  bool overwrite = false;

  std::string strategy = "both";
  std::uint64_t node_cap = 10'000'000;

  // Generators.
  std::string kind = "bipartite";  // gen: bipartite | graph | modular
  std::size_t n_objects = 100;
  std::size_t n_words = 100;
  double p = 0.02;
  std::size_t vertices = 500;
  std::size_t degree = 3;          // links per vertex in the graph generator
  double gamma = 1.0;
  double c_min = 1.0;
  std::size_t ensemble_size = 200;
  std::string costs_out;           // gen graph: also write degree costs here

  // Verification.
  std::uint64_t samples = 1'000'000;
  std::size_t instances = 1000;
  std::string report;
  std::string inject_fault;        // "", or "no-fractional"
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string millis(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// A loaded or generated problem: an oracle over the raw ground set plus raw
// per-element costs. Budgets are applied later.
struct Problem {
  std::string id;
  std::unique_ptr<ValueOracle> oracle;
  std::vector<double> costs;
};

inline std::vector<double> override_costs(const RunConfig& cfg,
                                          std::vector<double> costs) {
  if (cfg.costs.empty()) return costs;
  std::vector<double> loaded = load_cost_file(cfg.costs);
  if (loaded.size() != costs.size())
    throw ConfigError("cost file lists " + std::to_string(loaded.size()) +
                      " elements; the instance has " +
                      std::to_string(costs.size()));
  return loaded;
}

inline std::string stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

inline Problem load_problem(const RunConfig& cfg, std::uint64_t seed) {
  Problem prob;
  const std::string tag = "-s" + std::to_string(seed);
  if (cfg.objective == "coverage") {
    CoverageInstance cov =
        cfg.instance.empty()
            ? gen_random_bipartite(cfg.n_objects, cfg.n_words, cfg.p, seed)
            : load_coverage_file(cfg.instance);
    prob.id = (cfg.instance.empty() ? "coverage" : stem(cfg.instance)) + tag;
    prob.costs = override_costs(cfg, cov.costs);
    prob.oracle = std::make_unique<CoverageOracle>(cov);
  } else if (cfg.objective == "modular") {
    std::vector<double> weights;
    const std::string source = !cfg.instance.empty() ? cfg.instance : cfg.weights;
    if (!source.empty()) {
      weights = load_cost_file(source);
      prob.id = stem(source) + tag;
    } else {
      Rng rng(seed);
      weights.resize(cfg.n_objects);
      for (auto& w : weights) w = rng.uniform(0.0, 10.0);
      prob.id = "modular" + tag;
    }
    prob.costs = override_costs(cfg, std::vector<double>(weights.size(), 1.0));
    try {
      prob.oracle = std::make_unique<ModularOracle>(std::move(weights));
    } catch (const InvalidInstance& e) {
      throw ParseError(e.what());
    }
  } else if (cfg.objective == "influence") {
    Graph g;
    bool has_p = false;
    if (cfg.instance.empty()) {
      g = gen_random_graph(cfg.vertices, cfg.degree, seed);
      prob.id = "influence" + tag;
    } else {
      GraphFile file = load_graph_file(cfg.instance);
      g = std::move(file.graph);
      has_p = file.has_probabilities;
      prob.id = stem(cfg.instance) + tag;
    }
    if (g.n == 0) throw ParseError("graph has no vertices");
    const DegreeSetup setup = degree_weighted_setup(g, cfg.gamma, cfg.c_min);
    if (!has_p) apply_probabilities(g, setup.probabilities);
    prob.costs = override_costs(cfg, setup.costs);
    prob.oracle = std::make_unique<InfluenceOracle>(
        sample_live_edges(g, cfg.ensemble_size, seed));
  } else {
    throw ConfigError("unknown objective '" + cfg.objective + "'");
  }
  return prob;
}

// A budgeted view of a problem: filtered instance plus restricted oracle.
struct Budgeted {
  FilteredInstance filtered;
  std::unique_ptr<ContractedOracle> oracle;
};

inline Budgeted apply_budget(const Problem& prob, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget))
    throw ConfigError("budget must be positive; got " + num(budget));
  Budgeted out{filter_overweight(Instance(prob.costs, budget)), nullptr};
  out.oracle = std::make_unique<ContractedOracle>(
      *prob.oracle, ElementSet(prob.oracle->ground_size()),
      out.filtered.new_to_old);
  return out;
}

inline void validate_common(const RunConfig& cfg) {
  for (double b : cfg.budgets)
    if (!(b > 0.0) || !std::isfinite(b))
      throw ConfigError("budgets must be positive; got " + num(b));
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
  if (cfg.ensemble_size == 0) throw ConfigError("R must be at least 1");
  if (cfg.node_cap == 0) throw ConfigError("node cap must be positive");
}

// Output stream: the --out file, or `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: unreadable instance: " << e.what() << '\n';
    return kUnreadableInstance;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const EmptyInstance& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InvalidParameter& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InvalidInstance& e) {
    err << "error: unreadable instance: " << e.what() << '\n';
    return kUnreadableInstance;
  }
}

}  // namespace detail

// One BoundReport row per (seed, budget).
inline int cmd_greedy(const RunConfig& cfg, std::ostream& stdout_,
                      std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::validate_common(cfg);
    detail::Sink sink(cfg.out, stdout_);
    write_bound_csv_header(*sink);
    for (std::uint64_t seed : cfg.seeds) {
      const detail::Problem prob = detail::load_problem(cfg, seed);
      for (double b : cfg.budgets) {
        const detail::Budgeted view = detail::apply_budget(prob, b);
        const BoundedRun run = mgreedy_ub(*view.oracle, view.filtered.instance);
        const BoundReport& r = run.report;
        if (run.trace.submodularity_warning)
          log::warn(prob.id + ": oracle looks non-submodular");
        *sink << prob.id << ',' << detail::num(b) << ','
              << detail::num(r.f_sm) << ',' << detail::num(r.lambda) << ','
              << detail::num(r.leskovec) << ',' << detail::num(r.ratio_lambda)
              << ',' << detail::num(r.ratio_leskovec) << ','
              << r.oracle_calls << ',' << detail::millis(r.time_ms) << '\n';
        log::info(prob.id + " b=" + detail::num(b) +
                  " ratio_lambda=" + detail::num(r.ratio_lambda));
      }
    }
    return kOk;
  });
}

// BnbStats rows per (seed, budget, strategy). With strategy `both` a third
// row with strategy `pair` follows each pair: optimum is the common optimum,
// nodes_expanded and nodes_pruned hold the lambda and dca node counts, time
// is the sum, and capped_flag is set if either run hit the cap.
inline int cmd_bnb(const RunConfig& cfg, std::ostream& stdout_,
                   std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::validate_common(cfg);
    std::vector<BoundStrategy> strategies;
    if (cfg.strategy == "lambda" || cfg.strategy == "both")
      strategies.push_back(BoundStrategy::kLambda);
    if (cfg.strategy == "dca" || cfg.strategy == "both")
      strategies.push_back(BoundStrategy::kDca);
    if (strategies.empty())
      throw ConfigError("strategy must be lambda, dca or both");
    BnbOptions options;
    options.node_cap = cfg.node_cap;

    detail::Sink sink(cfg.out, stdout_);
    write_bnb_csv_header(*sink);
    int code = kOk;
    for (std::uint64_t seed : cfg.seeds) {
      const detail::Problem prob = detail::load_problem(cfg, seed);
      for (double b : cfg.budgets) {
        const detail::Budgeted view = detail::apply_budget(prob, b);
        std::vector<BnbStats> runs;
        for (BoundStrategy s : strategies) {
          runs.push_back(branch_and_bound(*view.oracle, view.filtered.instance,
                                          s, options));
          const BnbStats& st = runs.back();
          if (st.capped) log::warn(prob.id + ": node cap reached");
          *sink << prob.id << ',' << detail::num(b) << ',' << to_string(s)
                << ',' << detail::num(st.optimum) << ',' << st.nodes_expanded
                << ',' << st.nodes_pruned << ',' << detail::millis(st.time_ms)
                << ',' << (st.capped ? 1 : 0) << '\n';
        }
        if (runs.size() == 2) {
          const BnbStats& l = runs[0];
          const BnbStats& d = runs[1];
          const bool capped = l.capped || d.capped;
          if (!capped && std::abs(l.optimum - d.optimum) > 1e-9) {
            log::error(prob.id + ": strategies disagree on the optimum");
            code = kVerificationFailed;
          }
          *sink << prob.id << ',' << detail::num(b) << ",pair,"
                << detail::num(l.optimum) << ',' << l.nodes_expanded << ','
                << d.nodes_expanded << ','
                << detail::millis(l.time_ms + d.time_ms) << ','
                << (capped ? 1 : 0) << '\n';
        }
      }
    }
    return code;
  });
}

struct VerifySummary {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double min_slack = kInf;
};

// Constants, both program falsifications and the trace checker over a
// seeded instance suite. Exit 0 iff everything holds.
inline int cmd_verify(const RunConfig& cfg, std::ostream& stdout_,
                      std::ostream& err) {
  return detail::guarded(err, [&] {
    if (cfg.samples == 0) throw ConfigError("samples must be positive");
    if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
    if (!cfg.inject_fault.empty() && cfg.inject_fault != "no-fractional")
      throw ConfigError("unknown fault '" + cfg.inject_fault + "'");
    const std::uint64_t seed = cfg.seeds.front();

    std::ofstream report_file;
    std::ostringstream discard;
    std::ostream* report = &discard;
    if (!cfg.report.empty()) {
      report_file.open(cfg.report, std::ios::trunc);
      if (!report_file) throw ConfigError("cannot write '" + cfg.report + "'");
      report = &report_file;
    }

    bool ok = true;
    std::vector<std::string> failures;
    const Constants c = solve_constants(1e-12);
    const bool constants_ok =
        c.alpha_bot.certified() && c.alpha_prime.certified() &&
        c.beta.certified() && c.bot() > 0.405 && c.bot() < 0.406 &&
        c.prime() > 0.357 && c.prime() < 0.358 &&
        std::abs(c.prime() - (1.0 - std::exp(-c.beta.value))) < 1e-9;
    stdout_ << "alpha_bot " << detail::num(c.bot()) << "\nalpha_prime "
            << detail::num(c.prime()) << "\nbeta " << detail::num(c.beta.value)
            << "\none_minus_inv_sqrt_e " << detail::num(c.one_minus_inv_sqrt_e)
            << "\nconstants " << (constants_ok ? "ok" : "FAILED") << '\n';
    if (!constants_ok) failures.push_back("constants");

    const FalsificationResult main_prog =
        falsify_program_main(cfg.samples, seed, c.bot());
    const FalsificationResult simple_prog =
        falsify_program_simple(cfg.samples, seed, c.one_minus_inv_sqrt_e);
    stdout_ << "program_main min_alpha " << detail::num(main_prog.min_alpha)
            << (main_prog.holds ? " ok" : " FAILED") << '\n'
            << "program_simple min_alpha "
            << detail::num(simple_prog.min_alpha)
            << (simple_prog.holds ? " ok" : " FAILED") << '\n';
    if (!main_prog.holds) failures.push_back("program_main");
    if (!simple_prog.holds) failures.push_back("program_simple");

    TraceCheckOptions options;
    options.bound.fractional_term = cfg.inject_fault != "no-fractional";
    SuiteOptions suite;
    suite.count = cfg.instances;
    suite.seed = seed;

    std::map<std::string, VerifySummary> summary;
    std::vector<std::string> order;
    double worst_ratio = 1.0;
    for (std::size_t i = 0; i < suite.count; ++i) {
      const SuiteInstance inst = make_suite_instance(suite, i);
      const ProofWitness w =
          trace_inequalities(inst.oracle(), inst.instance(), c, options);
      worst_ratio = std::min(worst_ratio, w.ratio);
      for (const auto& chk : w.checks) {
        if (!summary.count(chk.name)) order.push_back(chk.name);
        VerifySummary& s = summary[chk.name];
        if (chk.skipped) {
          ++s.skipped;
          *report << inst.id() << ' ' << chk.name << " skipped " << chk.reason
                  << '\n';
          continue;
        }
        ++s.evaluated;
        s.min_slack = std::min(s.min_slack, chk.slack);
        *report << inst.id() << ' ' << chk.name << " slack "
                << detail::num(chk.slack) << '\n';
        if (chk.slack < -options.tolerance) {
          ++s.violations;
          if (s.violations == 1)
            log::error("violated " + chk.name + " on " + inst.id() + "\n" +
                       dump_instance(inst.oracle(), inst.instance()));
        }
      }
    }

    detail::Sink sink(cfg.out, stdout_);
    *sink << "inequality,evaluated,skipped,min_slack,violations\n";
    for (const auto& name : order) {
      const VerifySummary& s = summary[name];
      *sink << name << ',' << s.evaluated << ',' << s.skipped << ','
            << detail::num(s.evaluated ? s.min_slack : 0.0) << ','
            << s.violations << '\n';
      if (s.violations > 0) failures.push_back(name);
    }
    stdout_ << "worst_ratio " << detail::num(worst_ratio) << '\n';
    for (const auto& f : failures) {
      err << "verification failed: " << f << '\n';
      ok = false;
    }
    return ok ? kOk : kVerificationFailed;
  });
}

// Writes a generated instance in the text formats of io.hpp.
inline int cmd_gen(const RunConfig& cfg, std::ostream& stdout_,
                   std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    if (cfg.out.empty()) throw ConfigError("gen requires --out");
    if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
    for (const std::string& path : {cfg.out, cfg.costs_out}) {
      if (!path.empty() && !cfg.overwrite && std::filesystem::exists(path)) {
        err << "error: '" << path << "' exists; pass --overwrite\n";
        return kOutputExists;
      }
    }
    const std::uint64_t seed = cfg.seeds.front();
    std::ofstream out(cfg.out, std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + cfg.out + "'");
    if (cfg.kind == "bipartite") {
      write_coverage_file(
          out, gen_random_bipartite(cfg.n_objects, cfg.n_words, cfg.p, seed));
    } else if (cfg.kind == "graph") {
      Graph g = gen_random_graph(cfg.vertices, cfg.degree, seed);
      const DegreeSetup setup = degree_weighted_setup(g, cfg.gamma, cfg.c_min);
      apply_probabilities(g, setup.probabilities);
      write_graph_file(out, g, true);
      if (!cfg.costs_out.empty()) {
        std::ofstream costs(cfg.costs_out, std::ios::trunc);
        if (!costs) throw ConfigError("cannot write '" + cfg.costs_out + "'");
        write_cost_file(costs, setup.costs);
      }
    } else if (cfg.kind == "modular") {
      Rng rng(seed);
      std::vector<double> weights(cfg.n_objects);
      for (auto& w : weights) w = rng.uniform(0.0, 10.0);
      write_cost_file(out, weights);
    } else {
      throw ConfigError("unknown generator kind '" + cfg.kind + "'");
    }
    stdout_ << "wrote " << cfg.out << '\n';
    return kOk;
  });
}

inline int run(const RunConfig& cfg, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  if (cfg.command == "greedy") return cmd_greedy(cfg, out, err);
  if (cfg.command == "bnb") return cmd_bnb(cfg, out, err);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  if (cfg.command == "gen") return cmd_gen(cfg, out, err);
  err << "error: unknown command '" << cfg.command << "'\n";
  return kInvalidConfig;
}

}  // namespace submod::cli
