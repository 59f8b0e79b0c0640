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

// Exact solvers: exhaustive enumeration for tiny instances and a best-first
// branch-and-bound over lattice nodes [A, B] = { S : A <= S <= B }.
//
// A node is bounded either by running the bounded greedy on the contracted
// function g(T) = f(T + A) - f(A) over B \ A with the residual budget, or by
// the single knapsack relaxation f(A) + delta(b - c(A) | A).

#pragma once

#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "submod/bounds.hpp"
#include "submod/core.hpp"
#include "submod/greedy.hpp"

namespace submod {

inline constexpr std::size_t kBruteForceCap = 25;

struct ExactSolution {
  double value = 0.0;
  ElementSet set;
};

// Maximum of f over every feasible subset. Exact ties go to the
// lexicographically smallest set.
inline ExactSolution brute_force(const ValueOracle& oracle,
                                 const Instance& instance) {
  const std::size_t n = instance.size();
  if (n > kBruteForceCap)
    throw CapExceeded("brute force is limited to " +
                      std::to_string(kBruteForceCap) + " elements; got " +
                      std::to_string(n));
  if (oracle.ground_size() != n)
    throw MisuseError("oracle and instance disagree on the ground set size");
  ExactSolution best{0.0, ElementSet(n)};
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    double c = 0.0;
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      c += instance.cost(static_cast<Element>(std::countr_zero(m)));
    if (c > instance.budget() + kBudgetSlack) continue;
    const ElementSet s = ElementSet::from_mask(n, mask);
    const double value = oracle.evaluate(s);
    if (value > best.value ||
        (value == best.value && lexicographically_less(s, best.set))) {
      best.value = value;
      best.set = s;
    }
  }
  return best;
}

struct SearchNode {
  ElementSet committed;   // A
  ElementSet allowed;     // B, with A <= B
  double committed_cost = 0.0;
  double committed_value = 0.0;
  double bound = 0.0;
  std::uint64_t id = 0;

  double residual(double budget) const { return budget - committed_cost; }
};

enum class BoundStrategy { kLambda, kDca };

inline const char* to_string(BoundStrategy s) {
  return s == BoundStrategy::kLambda ? "lambda" : "dca";
}

namespace detail {

struct NodeBound {
  double value = 0.0;
  std::vector<Element> candidates;   // B \ A restricted to the residual budget
  std::optional<Element> branch;     // best-ratio candidate on top of A
};

inline NodeBound bound_node(const ValueOracle& oracle, const Instance& instance,
                            const SearchNode& node, BoundStrategy strategy) {
  const double residual = node.residual(instance.budget());
  if (residual < -kBudgetSlack)
    throw InfeasibleNode("node exceeds the budget by " +
                         std::to_string(-residual));
  NodeBound out;
  out.value = node.committed_value;
  node.allowed.for_each([&](Element v) {
    if (!node.committed.contains(v) &&
        instance.cost(v) <= residual + kBudgetSlack)
      out.candidates.push_back(v);
  });
  if (out.candidates.empty() || residual <= 0.0) {
    out.candidates.clear();
    return out;
  }

  if (strategy == BoundStrategy::kDca) {
    std::vector<double> gains(out.candidates.size());
    oracle.marginals(node.committed, out.candidates, gains);
    std::vector<KnapsackItem> items;
    items.reserve(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) {
      const Element v = out.candidates[i];
      items.push_back({checked_gain(gains[i], v), instance.cost(v), v});
      if (!out.branch ||
          better_ratio(items.back().gain, items.back().cost, v,
                       items[*out.branch].gain, items[*out.branch].cost,
                       items[*out.branch].id))
        out.branch = static_cast<Element>(i);
    }
    out.branch = out.candidates[*out.branch];
    out.value += fractional_knapsack_bound(std::move(items), residual);
    return out;
  }

  std::vector<double> costs;
  costs.reserve(out.candidates.size());
  for (Element v : out.candidates) costs.push_back(instance.cost(v));
  const Instance local(std::move(costs), residual);
  const ContractedOracle contracted(oracle, node.committed, out.candidates);
  const BoundedRun run = mgreedy_ub(contracted, local);
  out.branch = out.candidates[run.trace.order.front().element];
  out.value += run.report.lambda;
  return out;
}

}  // namespace detail

// f(A) + lambda of the contracted problem over B \ A.
inline double lambda_bound(const ValueOracle& oracle, const Instance& instance,
                           const SearchNode& node) {
  return detail::bound_node(oracle, instance, node, BoundStrategy::kLambda)
      .value;
}

// f(A) + delta(b - c(A) | A) over B \ A.
inline double dca_bound(const ValueOracle& oracle, const Instance& instance,
                        const SearchNode& node) {
  return detail::bound_node(oracle, instance, node, BoundStrategy::kDca).value;
}

// Node for the lattice [A, B]; evaluates f(A) once.
inline SearchNode make_node(const ValueOracle& oracle, const Instance& instance,
                            ElementSet committed, ElementSet allowed) {
  if (!committed.is_subset_of(allowed))
    throw MisuseError("committed set must lie inside the allowed set");
  SearchNode node;
  node.committed_cost = cost(instance, committed);
  node.committed_value = committed.empty() ? 0.0 : oracle.evaluate(committed);
  node.committed = std::move(committed);
  node.allowed = std::move(allowed);
  return node;
}

struct BnbOptions {
  std::uint64_t node_cap = 10'000'000;
  // Optional starting incumbent; used when it beats the greedy solution.
  std::optional<ElementSet> warm_start;
  // Called for every bounded node, after its bound is set.
  std::function<void(const SearchNode&)> on_node;
};

struct BnbStats {
  double optimum = 0.0;
  ElementSet best;
  std::uint64_t nodes_expanded = 0;   // nodes whose bound was computed
  std::uint64_t nodes_pruned = 0;     // of those, nodes discarded by the bound
  std::uint64_t incumbent_updates = 0;
  double time_ms = 0.0;
  BoundStrategy strategy = BoundStrategy::kLambda;
  bool capped = false;
};

// Best-first branch-and-bound. The frontier is ordered by bound (largest
// first) and then by node id; each expansion branches on the best-ratio
// candidate v, producing [A + v, B] and [A, B - v].
inline BnbStats branch_and_bound(const ValueOracle& oracle,
                                 const Instance& instance,
                                 BoundStrategy strategy,
                                 const BnbOptions& options = {}) {
  detail::require_ready(oracle, instance);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = instance.size();
  const double slack = 1e-9;

  BnbStats stats;
  stats.strategy = strategy;
  {
    const BoundedRun seed = mgreedy_ub(oracle, instance);
    stats.best = seed.trace.selected;
    stats.optimum = seed.report.f_sm;
  }
  if (options.warm_start) {
    if (!is_feasible(instance, *options.warm_start))
      throw MisuseError("warm start exceeds the budget");
    const double v = oracle.evaluate(*options.warm_start);
    if (v > stats.optimum) {
      stats.optimum = v;
      stats.best = *options.warm_start;
    }
  }

  struct Entry {
    SearchNode node;
    std::vector<Element> candidates;
    Element branch;
  };
  struct Key {
    double bound;
    std::uint64_t id;
    std::size_t slot;
  };
  auto lower = [](const Key& a, const Key& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  };
  std::priority_queue<Key, std::vector<Key>, decltype(lower)> frontier(lower);
  std::vector<std::optional<Entry>> slots;
  std::vector<std::size_t> free_slots;
  std::uint64_t next_id = 0;

  auto offer = [&](SearchNode node) {
    if (stats.nodes_expanded >= options.node_cap) {
      stats.capped = true;
      return;
    }
    ++stats.nodes_expanded;
    node.id = next_id++;
    if (node.committed_value > stats.optimum) {
      stats.optimum = node.committed_value;
      stats.best = node.committed;
      ++stats.incumbent_updates;
    }
    detail::NodeBound b = detail::bound_node(oracle, instance, node, strategy);
    node.bound = b.value;
    if (options.on_node) options.on_node(node);
    if (!b.branch || node.bound <= stats.optimum + slack) {
      ++stats.nodes_pruned;
      return;
    }
    std::size_t slot;
    if (free_slots.empty()) {
      slot = slots.size();
      slots.emplace_back();
    } else {
      slot = free_slots.back();
      free_slots.pop_back();
    }
    const Key key{node.bound, node.id, slot};
    slots[slot] = Entry{std::move(node), std::move(b.candidates), *b.branch};
    frontier.push(key);
  };

  offer(make_node(oracle, instance, ElementSet(n), ElementSet::full(n)));

  while (!frontier.empty()) {
    const Key key = frontier.top();
    frontier.pop();
    Entry entry = std::move(*slots[key.slot]);
    slots[key.slot].reset();
    free_slots.push_back(key.slot);
    if (entry.node.bound <= stats.optimum + slack) {
      ++stats.nodes_pruned;
      continue;
    }
    if (stats.capped) break;

    ElementSet allowed(n);
    for (Element v : entry.candidates) allowed.insert(v);
    allowed |= entry.node.committed;
    const Element v = entry.branch;

    offer(make_node(oracle, instance, entry.node.committed.with(v), allowed));
    SearchNode out = entry.node;
    out.allowed = allowed.without(v);
    offer(std::move(out));
  }

  stats.time_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return stats;
}

inline void write_bnb_csv_header(std::ostream& out) {
  out << "instance_id,budget,strategy,optimum,nodes_expanded,nodes_pruned,"
         "time_ms,capped_flag\n";
}

}  // namespace submod
