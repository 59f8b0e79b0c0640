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

// Data-dependent upper bounds on the optimum.
//
// delta() is the fractional-knapsack bound on the best marginal gain that a
// budget-feasible set can add on top of S. Since f(S) + delta(S) >= f(OPT)
// for every S, the minimum of that quantity along the greedy chain (lambda)
// is an upper bound on the optimum that the greedy run gets almost for free.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "submod/core.hpp"
#include "submod/greedy.hpp"

namespace submod {

struct KnapsackItem {
  double gain;
  double cost;
  Element id;
};

struct BoundOptions {
  // Include the fractional part of the first item that does not fit. Turning
  // this off yields an unsound bound and exists only for fault injection.
  bool fractional_term = true;
};

// Optimum of max sum w_i x_i s.t. sum c_i x_i <= budget, 0 <= x_i <= 1.
// Items are taken in descending gain/cost order (ties: lower id); the first
// item that strictly overflows contributes the fractional remainder.
inline double fractional_knapsack_bound(std::vector<KnapsackItem> items,
                                        double budget,
                                        const BoundOptions& options = {}) {
  if (budget < 0.0)
    throw DomainError("knapsack budget must be non-negative; got " +
                      std::to_string(budget));
  std::sort(items.begin(), items.end(),
            [](const KnapsackItem& a, const KnapsackItem& b) {
              return detail::better_ratio(a.gain, a.cost, a.id, b.gain, b.cost,
                                          b.id);
            });
  double total = 0.0;
  double used = 0.0;
  for (const auto& item : items) {
    if (used + item.cost > budget) {
      if (options.fractional_term)
        total += item.gain * (budget - used) / item.cost;
      return total;
    }
    used += item.cost;
    total += item.gain;
  }
  return total;
}

// Fractional-knapsack bound on max { f(T | S) : c(T) <= budget } computed
// from fresh marginals of every element outside S.
inline double delta(const ValueOracle& oracle, const Instance& instance,
                    const ElementSet& s, double budget,
                    const BoundOptions& options = {}) {
  if (budget < 0.0)
    throw DomainError("delta budget must be non-negative; got " +
                      std::to_string(budget));
  if (oracle.ground_size() != instance.size() ||
      s.universe() != instance.size())
    throw MisuseError("oracle, instance and set disagree on the ground set");
  std::vector<Element> rest;
  for (Element v = 0; v < instance.size(); ++v)
    if (!s.contains(v)) rest.push_back(v);
  std::vector<double> gains(rest.size());
  oracle.marginals(s, rest, gains);
  std::vector<KnapsackItem> items;
  items.reserve(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i)
    items.push_back({detail::checked_gain(gains[i], rest[i]),
                     instance.cost(rest[i]), rest[i]});
  return fractional_knapsack_bound(std::move(items), budget, options);
}

struct BoundReport {
  double f_sm = 0.0;
  double lambda = 0.0;
  double leskovec = 0.0;           // f(S_g) + delta(b | S_g)
  std::vector<double> terms;       // f(S_i) + delta(b | S_i), i = 0..|S_g|
  double ratio_lambda = 1.0;
  double ratio_leskovec = 1.0;
  std::uint64_t oracle_calls = 0;
  double time_ms = 0.0;
};

struct BoundedRun {
  GreedyTrace trace;
  BoundReport report;
};

namespace detail {

inline double safe_ratio(double num, double den) {
  if (den <= 0.0) return 1.0;
  return num / den;
}

}  // namespace detail

// The modified greedy loop with the bound term recorded before the loop and
// after every successful addition.
inline BoundedRun mgreedy_ub(const ValueOracle& oracle,
                             const Instance& instance,
                             const BoundOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  BoundReport report;
  std::vector<KnapsackItem> items;
  auto record = [&](const ElementSet& s, double value,
                    const std::vector<double>& gains) {
    items.clear();
    for (Element v = 0; v < instance.size(); ++v)
      if (!s.contains(v)) items.push_back({gains[v], instance.cost(v), v});
    report.terms.push_back(
        value +
        fractional_knapsack_bound(items, instance.budget(), options));
  };
  GreedyTrace trace = detail::run_greedy(oracle, instance, true, record);

  report.f_sm = trace.selected_value();
  report.lambda = *std::min_element(report.terms.begin(), report.terms.end());
  report.leskovec = report.terms.back();
  report.ratio_lambda = detail::safe_ratio(report.f_sm, report.lambda);
  report.ratio_leskovec = detail::safe_ratio(report.f_sm, report.leskovec);
  report.oracle_calls = trace.oracle_calls;
  report.time_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return {std::move(trace), std::move(report)};
}

// f(S_m) >= alpha' * lambda, the data-dependent guarantee.
inline bool guarantee_check(const BoundReport& report, double alpha_prime) {
  return report.f_sm >= alpha_prime * report.lambda - 1e-9;
}

inline void write_bound_csv_header(std::ostream& out) {
  out << "instance_id,budget,f_sm,lambda,leskovec,ratio_lambda,"
         "ratio_leskovec,oracle_calls,time_ms\n";
}

struct CardinalityRun {
  ElementSet selected;             // S_g after k steps
  double value = 0.0;              // f(S_g)
  double lambda = 0.0;
  std::vector<double> terms;       // f(S_i) + sum of k largest f(v | S_i)
  bool bound_holds = true;         // lambda <= f(S_g) / (1 - 1/e) + 1e-9
};

// Plain greedy by marginal gain under |S| <= k, with the cardinality form of
// the bound. With unit costs the fractional term of delta vanishes and the
// knapsack bound reduces to the k largest marginals.
inline CardinalityRun cardinality_lambda(const ValueOracle& oracle,
                                         std::size_t k) {
  if (k == 0) throw InvalidParameter("cardinality k must be positive");
  const std::size_t n = oracle.ground_size();
  CardinalityRun run;
  run.selected = ElementSet(n);
  std::vector<Element> rest;
  std::vector<double> gains;
  double value = 0.0;
  for (std::size_t step = 0;; ++step) {
    rest.clear();
    for (Element v = 0; v < n; ++v)
      if (!run.selected.contains(v)) rest.push_back(v);
    gains.assign(rest.size(), 0.0);
    oracle.marginals(run.selected, rest, gains);
    for (std::size_t i = 0; i < rest.size(); ++i)
      gains[i] = detail::checked_gain(gains[i], rest[i]);

    std::vector<double> sorted = gains;
    const std::size_t take = std::min(k, sorted.size());
    std::partial_sort(sorted.begin(),
                      sorted.begin() + static_cast<std::ptrdiff_t>(take),
                      sorted.end(), std::greater<>());
    double top = 0.0;
    for (std::size_t i = 0; i < take; ++i) top += sorted[i];
    run.terms.push_back(value + top);

    if (step == k || rest.empty()) break;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rest.size(); ++i)
      if (gains[i] > gains[best]) best = i;
    run.selected.insert(rest[best]);
    value = oracle.evaluate(run.selected);
  }
  run.value = value;
  run.lambda = *std::min_element(run.terms.begin(), run.terms.end());
  run.bound_holds =
      run.lambda <= run.value / (1.0 - std::exp(-1.0)) + 1e-9;
  return run;
}

// Instance overload: requires unit costs and reads k from the budget.
inline CardinalityRun cardinality_lambda(const ValueOracle& oracle,
                                         const Instance& instance) {
  if (!instance.unit_costs())
    throw MisuseError("cardinality bound requires unit costs");
  if (oracle.ground_size() != instance.size())
    throw MisuseError("oracle and instance disagree on the ground set size");
  const double k = std::floor(instance.budget() + kBudgetSlack);
  if (k < 1.0) throw InvalidParameter("cardinality budget below one element");
  return cardinality_lambda(oracle, static_cast<std::size_t>(k));
}

}  // namespace submod
