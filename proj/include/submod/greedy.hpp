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

// Modified greedy for monotone submodular maximization under a knapsack
// constraint.
//
// The greedy loop repeatedly takes the remaining element with the largest
// cost-effectiveness f(v | S_g) / c(v). The element is added when it still
// fits in the budget and abandoned otherwise; either way it leaves the search
// space. Afterwards the best singleton v* is compared against S_g and the
// better of the two is returned as S_m.
//
// All ratio comparisons are cross-multiplied and ties go to the lower id, so
// mgreedy() and lazy_mgreedy() produce identical traces.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "submod/core.hpp"

namespace submod {

struct GreedyStep {
  Element element;
  double gain;        // f(u_i | S_{i-1}) as reported when u_i was selected
  double value;       // f(S_i)
  double total_cost;  // c(S_i)
};

struct Consideration {
  Element element;
  bool added;
  std::size_t step;  // |S_g| at the moment the element was considered
};

struct Rejection {
  Element element;
  std::size_t step;
};

struct GreedyTrace {
  std::size_t ground_size = 0;
  double budget = 0.0;

  std::vector<GreedyStep> added;        // u_1, u_2, ...
  std::vector<Rejection> abandoned;     // in rejection order
  std::vector<Consideration> order;     // every element, in consideration order

  Element best_singleton = 0;           // v*
  double best_singleton_value = 0.0;    // f({v*})

  ElementSet greedy_set;                // S_g
  ElementSet selected;                  // S_m
  bool selected_is_singleton = false;

  std::uint64_t oracle_calls = 0;
  bool submodularity_warning = false;
  std::vector<std::string> warnings;

  double greedy_value() const { return added.empty() ? 0.0 : added.back().value; }
  double greedy_cost() const {
    return added.empty() ? 0.0 : added.back().total_cost;
  }
  double selected_value() const {
    return selected_is_singleton ? best_singleton_value : greedy_value();
  }

  // f(S_i) and c(S_i) for 0 <= i <= |S_g|.
  double value_at(std::size_t i) const {
    return i == 0 ? 0.0 : added.at(i - 1).value;
  }
  double cost_at(std::size_t i) const {
    return i == 0 ? 0.0 : added.at(i - 1).total_cost;
  }

  // S_i as an element set.
  ElementSet prefix(std::size_t i) const {
    ElementSet s(ground_size);
    for (std::size_t j = 0; j < i; ++j) s.insert(added.at(j).element);
    return s;
  }

  // A_i: elements abandoned before u_i was selected. Indices past |S_g|
  // yield every abandoned element.
  ElementSet abandoned_until(std::size_t i) const {
    ElementSet s(ground_size);
    for (const auto& r : abandoned)
      if (r.step < i) s.insert(r.element);
    return s;
  }
};

namespace detail {

// True when a = (gain_a, cost_a, id_a) beats b under the greedy order.
inline bool better_ratio(double gain_a, double cost_a, Element id_a,
                         double gain_b, double cost_b, Element id_b) {
  const double lhs = gain_a * cost_b;
  const double rhs = gain_b * cost_a;
  if (lhs != rhs) return lhs > rhs;
  return id_a < id_b;
}

inline double checked_gain(double g, Element v) {
  if (g < 0.0) {
    if (g < -kGainTolerance)
      throw NonMonotoneOracle("negative marginal gain " + std::to_string(g) +
                              " for element " + std::to_string(v));
    return 0.0;
  }
  return g;
}

inline void require_ready(const ValueOracle& oracle, const Instance& instance) {
  if (oracle.ground_size() != instance.size())
    throw MisuseError("oracle and instance disagree on the ground set size");
  if (!instance.filtered())
    throw MisuseError("instance contains elements costlier than the budget; "
                      "run filter_overweight first");
}

inline void finish(GreedyTrace& trace, std::span<const double> singletons) {
  for (Element v = 0; v < singletons.size(); ++v) {
    if (v == 0 || singletons[v] > trace.best_singleton_value) {
      trace.best_singleton = v;
      trace.best_singleton_value = singletons[v];
    }
  }
  trace.greedy_set = trace.prefix(trace.added.size());
  trace.selected_is_singleton =
      trace.best_singleton_value > trace.greedy_value();
  trace.selected = trace.selected_is_singleton
                       ? ElementSet::of(trace.ground_size,
                                        {trace.best_singleton})
                       : trace.greedy_set;
}

// Shared greedy loop. `on_state(S_i, f(S_i), gains)` is invoked for S_0 and
// after every addition; when `scan_all` is set, gains[v] holds f(v | S_i) for
// every v outside S_i, otherwise only for still-unconsidered elements.
template <typename OnState>
GreedyTrace run_greedy(const ValueOracle& oracle, const Instance& instance,
                       bool scan_all, OnState&& on_state) {
  require_ready(oracle, instance);
  const std::size_t n = instance.size();
  const std::uint64_t calls_before = oracle.calls();

  GreedyTrace trace;
  trace.ground_size = n;
  trace.budget = instance.budget();

  ElementSet current(n);
  std::vector<char> remaining(n, 1);
  std::vector<double> gains(n, 0.0);
  std::vector<Element> candidates;
  std::vector<double> buffer;
  std::size_t left = n;
  double value = 0.0;
  double spent = 0.0;

  auto refresh = [&] {
    candidates.clear();
    for (Element v = 0; v < n; ++v)
      if (scan_all ? !current.contains(v) : remaining[v] != 0)
        candidates.push_back(v);
    buffer.resize(candidates.size());
    oracle.marginals(current, candidates, buffer);
    for (std::size_t i = 0; i < candidates.size(); ++i)
      gains[candidates[i]] = checked_gain(buffer[i], candidates[i]);
  };

  refresh();
  const std::vector<double> singletons = gains;  // f({v}) since f(empty) = 0
  on_state(std::as_const(current), value, std::as_const(gains));

  while (left > 0) {
    std::optional<Element> best;
    for (Element v = 0; v < n; ++v) {
      if (!remaining[v]) continue;
      if (!best || better_ratio(gains[v], instance.cost(v), v, gains[*best],
                                instance.cost(*best), *best))
        best = v;
    }
    const Element u = *best;
    remaining[u] = 0;
    --left;
    if (spent + instance.cost(u) <= instance.budget() + kBudgetSlack) {
      trace.order.push_back({u, true, trace.added.size()});
      current.insert(u);
      spent += instance.cost(u);
      const double gain = gains[u];
      value = oracle.evaluate(current);
      trace.added.push_back({u, gain, value, spent});
      if (left > 0 || scan_all) {
        refresh();
        on_state(std::as_const(current), value, std::as_const(gains));
      }
    } else {
      trace.order.push_back({u, false, trace.added.size()});
      trace.abandoned.push_back({u, trace.added.size()});
    }
  }

  finish(trace, singletons);
  trace.oracle_calls = oracle.calls() - calls_before;
  return trace;
}

}  // namespace detail

// Modified greedy. Requires a filtered instance (every c(v) <= b).
inline GreedyTrace mgreedy(const ValueOracle& oracle, const Instance& instance) {
  return detail::run_greedy(oracle, instance, false,
                            [](const ElementSet&, double,
                               const std::vector<double>&) {});
}

// Same trace as mgreedy(), using stale gains as upper bounds on fresh ones so
// only the top of a priority queue is re-evaluated. If a re-evaluated gain
// exceeds its stale value the oracle is not submodular; the round then falls
// back to a full rescan and the trace carries a warning.
inline GreedyTrace lazy_mgreedy(const ValueOracle& oracle,
                                const Instance& instance) {
  detail::require_ready(oracle, instance);
  const std::size_t n = instance.size();
  const std::uint64_t calls_before = oracle.calls();

  GreedyTrace trace;
  trace.ground_size = n;
  trace.budget = instance.budget();

  struct Entry {
    double gain;
    double cost;
    Element id;
    std::size_t version;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    return detail::better_ratio(b.gain, b.cost, b.id, a.gain, a.cost, a.id);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  ElementSet current(n);
  std::vector<Element> all(n);
  for (Element v = 0; v < n; ++v) all[v] = v;
  std::vector<double> singletons(n);
  oracle.marginals(current, all, singletons);
  for (Element v = 0; v < n; ++v) {
    singletons[v] = detail::checked_gain(singletons[v], v);
    heap.push({singletons[v], instance.cost(v), v, 0});
  }

  std::size_t version = 0;
  double spent = 0.0;
  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.version != version) {
      const double fresh =
          detail::checked_gain(oracle.marginal(top.id, current), top.id);
      if (fresh > top.gain + 1e-12 * std::max(1.0, top.gain)) {
        trace.submodularity_warning = true;
        trace.warnings.push_back(
            "marginal of element " + std::to_string(top.id) +
            " increased after set growth; rescanning");
        std::vector<Element> rest{top.id};
        while (!heap.empty()) {
          rest.push_back(heap.top().id);
          heap.pop();
        }
        std::vector<double> gains(rest.size());
        oracle.marginals(current, rest, gains);
        for (std::size_t i = 0; i < rest.size(); ++i)
          heap.push({detail::checked_gain(gains[i], rest[i]),
                     instance.cost(rest[i]), rest[i], version});
        continue;
      }
      heap.push({fresh, top.cost, top.id, version});
      continue;
    }
    if (spent + top.cost <= instance.budget() + kBudgetSlack) {
      trace.order.push_back({top.id, true, trace.added.size()});
      current.insert(top.id);
      spent += top.cost;
      trace.added.push_back(
          {top.id, top.gain, oracle.evaluate(current), spent});
      ++version;
    } else {
      trace.order.push_back({top.id, false, trace.added.size()});
      trace.abandoned.push_back({top.id, trace.added.size()});
    }
  }

  detail::finish(trace, singletons);
  trace.oracle_calls = oracle.calls() - calls_before;
  return trace;
}

// The piecewise-linear extension F of f along the greedy chain:
// F(0) = 0, F(c(S_i)) = f(S_i), linear in between. Defined on [0, c(S_g)].
class ContinuousExtension {
 public:
  explicit ContinuousExtension(const GreedyTrace& trace) : trace_(trace) {}

  double domain_end() const { return trace_.greedy_cost(); }

  double operator()(double x) const {
    if (!(x >= 0.0) || x > domain_end() + kBudgetSlack)
      throw DomainError("F(x) is defined on [0, c(S_g)]; got x = " +
                        std::to_string(x));
    if (x == 0.0) return 0.0;
    const auto& steps = trace_.added;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const double lo = trace_.cost_at(j);
      const double hi = steps[j].total_cost;
      if (x == hi) return steps[j].value;
      if (x > lo && x < hi) {
        const double base = trace_.value_at(j);
        const double rise = steps[j].value - base;
        const double width = hi - lo;
        return base + rise * (x - lo) / width;
      }
    }
    return trace_.greedy_value();
  }

 private:
  const GreedyTrace& trace_;
};

inline double eval_extension(const GreedyTrace& trace, double x) {
  return ContinuousExtension(trace)(x);
}

// Line-oriented dump consumed by the verifier report.
inline void write_trace(std::ostream& out, const GreedyTrace& trace) {
  out.precision(17);
  out << "ground_size " << trace.ground_size << "\n";
  out << "budget " << trace.budget << "\n";
  for (const auto& c : trace.order)
    out << (c.added ? "add " : "reject ") << c.element << " at " << c.step
        << "\n";
  for (std::size_t i = 0; i < trace.added.size(); ++i)
    out << "S" << i + 1 << " value " << trace.added[i].value << " cost "
        << trace.added[i].total_cost << "\n";
  out << "best_singleton " << trace.best_singleton << " value "
      << trace.best_singleton_value << "\n";
  out << "selected " << (trace.selected_is_singleton ? "singleton" : "greedy")
      << " value " << trace.selected_value() << "\n";
}

}  // namespace submod
