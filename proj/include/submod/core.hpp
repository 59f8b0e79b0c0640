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

// Instance model, knapsack feasibility and the value-oracle contract shared
// by every objective and solver.

#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "submod/element_set.hpp"
#include "submod/error.hpp"

namespace submod {

// Absolute slack applied to every budget comparison.
inline constexpr double kBudgetSlack = 1e-12;

// Tolerance for marginal gains: values in [-kGainTolerance, 0) are clipped to
// zero, anything more negative means the oracle is not monotone.
inline constexpr double kGainTolerance = 1e-9;

// A ground set {0, ..., n-1} with strictly positive additive costs and a
// positive budget.
class Instance {
 public:
  Instance(std::vector<double> costs, double budget)
      : costs_(std::move(costs)), budget_(budget) {
    if (!(budget_ > 0.0) || !std::isfinite(budget_))
      throw InvalidInstance("budget must be positive and finite");
    for (std::size_t v = 0; v < costs_.size(); ++v) {
      if (!(costs_[v] > 0.0) || !std::isfinite(costs_[v]))
        throw InvalidInstance("cost of element " + std::to_string(v) +
                              " must be positive and finite");
    }
  }

  std::size_t size() const { return costs_.size(); }
  double budget() const { return budget_; }
  double cost(Element v) const { return costs_.at(v); }
  std::span<const double> costs() const { return costs_; }

  // True when every element fits in the budget on its own.
  bool filtered() const {
    for (double c : costs_)
      if (c > budget_ + kBudgetSlack) return false;
    return true;
  }

  double total_cost() const {
    double sum = 0.0;
    for (double c : costs_) sum += c;
    return sum;
  }

  bool unit_costs() const {
    for (double c : costs_)
      if (c != 1.0) return false;
    return true;
  }

 private:
  std::vector<double> costs_;
  double budget_;
};

// c(S). Throws MalformedSolution if S mentions an element outside [0, n).
inline double cost(const Instance& instance, const ElementSet& s) {
  double sum = 0.0;
  s.for_each([&](Element v) {
    if (v >= instance.size())
      throw MalformedSolution("element " + std::to_string(v) +
                              " outside instance of size " +
                              std::to_string(instance.size()));
    sum += instance.cost(v);
  });
  return sum;
}

inline bool is_feasible(const Instance& instance, const ElementSet& s) {
  return cost(instance, s) <= instance.budget() + kBudgetSlack;
}

// A duplicate-free member set together with its cached cost.
class SolutionSet {
 public:
  SolutionSet(const Instance& instance, std::span<const Element> ids)
      : members_(instance.size()) {
    for (Element v : ids) {
      if (v >= instance.size())
        throw MalformedSolution("element " + std::to_string(v) +
                                " outside instance of size " +
                                std::to_string(instance.size()));
      members_.insert(v);
    }
    cost_ = submod::cost(instance, members_);
  }

  SolutionSet(const Instance& instance, ElementSet members)
      : members_(std::move(members)), cost_(submod::cost(instance, members_)) {}

  const ElementSet& members() const { return members_; }
  double cost() const { return cost_; }
  std::size_t size() const { return members_.size(); }

 private:
  ElementSet members_;
  double cost_ = 0.0;
};

// Result of dropping elements that cannot appear in any feasible solution.
struct FilteredInstance {
  Instance instance;
  std::vector<Element> new_to_old;
  std::vector<std::optional<Element>> old_to_new;

  bool identity() const { return new_to_old.size() == old_to_new.size(); }
};

// Restricts the instance to {v : c(v) <= b} and renumbers the survivors
// densely, preserving their relative order.
inline FilteredInstance filter_overweight(const Instance& instance) {
  std::vector<double> kept;
  std::vector<Element> new_to_old;
  std::vector<std::optional<Element>> old_to_new(instance.size());
  for (Element v = 0; v < instance.size(); ++v) {
    if (instance.cost(v) <= instance.budget() + kBudgetSlack) {
      old_to_new[v] = static_cast<Element>(new_to_old.size());
      new_to_old.push_back(v);
      kept.push_back(instance.cost(v));
    }
  }
  if (kept.empty())
    throw EmptyInstance("no element fits within budget " +
                        std::to_string(instance.budget()));
  return FilteredInstance{Instance(std::move(kept), instance.budget()),
                          std::move(new_to_old), std::move(old_to_new)};
}

// Black-box access to a normalized monotone submodular set function.
//
// Every call to evaluate() or marginal() bumps the call counter by one; a
// batched marginals() call counts once per candidate. The counter is atomic so
// a read-only oracle may be shared across threads.
class ValueOracle {
 public:
  virtual ~ValueOracle() = default;

  virtual std::size_t ground_size() const = 0;

  double evaluate(const ElementSet& s) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_evaluate(s);
  }

  // f(v | S) = f(S + v) - f(S).
  double marginal(Element v, const ElementSet& s) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_marginal(v, s);
  }

  // out[i] = f(candidates[i] | S). Implementations must return exactly the
  // values marginal() would.
  void marginals(const ElementSet& s, std::span<const Element> candidates,
                 std::span<double> out) const {
    if (out.size() != candidates.size())
      throw MisuseError("marginals: output size mismatch");
    calls_.fetch_add(candidates.size(), std::memory_order_relaxed);
    do_marginals(s, candidates, out);
  }

  std::uint64_t calls() const {
    return calls_.load(std::memory_order_relaxed);
  }
  void reset_calls() const { calls_.store(0, std::memory_order_relaxed); }

  // Human-readable dump used in verifier failure reports.
  virtual std::string describe() const { return "<opaque oracle>"; }

 protected:
  virtual double do_evaluate(const ElementSet& s) const = 0;

  virtual double do_marginal(Element v, const ElementSet& s) const {
    if (s.contains(v)) return 0.0;
    return do_evaluate(s.with(v)) - do_evaluate(s);
  }

  virtual void do_marginals(const ElementSet& s,
                            std::span<const Element> candidates,
                            std::span<double> out) const {
    for (std::size_t i = 0; i < candidates.size(); ++i)
      out[i] = do_marginal(candidates[i], s);
  }

 private:
  mutable std::atomic<std::uint64_t> calls_{0};
};

// g(T) = f(T' + A) - f(A), where T' lifts local ids of T through `lift` into
// the base ground set. With an empty A this is a plain restriction of f to a
// subset of its ground set.
class ContractedOracle : public ValueOracle {
 public:
  ContractedOracle(const ValueOracle& base, ElementSet committed,
                   std::vector<Element> lift)
      : base_(base),
        committed_(std::move(committed)),
        lift_(std::move(lift)),
        committed_value_(committed_.empty() ? 0.0
                                            : base_.evaluate(committed_)) {
    if (committed_.universe() != base_.ground_size())
      throw MisuseError("committed set over the wrong ground set");
    for (Element g : lift_) {
      if (g >= base_.ground_size() || committed_.contains(g))
        throw MisuseError("contraction maps onto an invalid element");
    }
  }

  std::size_t ground_size() const override { return lift_.size(); }
  double committed_value() const { return committed_value_; }
  std::span<const Element> lift() const { return lift_; }

  ElementSet lifted(const ElementSet& local) const {
    ElementSet g = committed_;
    local.for_each([&](Element v) { g.insert(lift_.at(v)); });
    return g;
  }

  std::string describe() const override {
    return "contraction of " + base_.describe();
  }

 protected:
  double do_evaluate(const ElementSet& s) const override {
    if (s.empty()) return 0.0;
    return base_.evaluate(lifted(s)) - committed_value_;
  }

  double do_marginal(Element v, const ElementSet& s) const override {
    return base_.marginal(lift_.at(v), lifted(s));
  }

  void do_marginals(const ElementSet& s, std::span<const Element> candidates,
                    std::span<double> out) const override {
    std::vector<Element> mapped(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
      mapped[i] = lift_.at(candidates[i]);
    base_.marginals(lifted(s), mapped, out);
  }

 private:
  const ValueOracle& base_;
  ElementSet committed_;
  std::vector<Element> lift_;
  double committed_value_;
};

// An oracle restricted to the survivors of filter_overweight().
inline ContractedOracle restrict_to(const ValueOracle& base,
                                    const FilteredInstance& filtered) {
  return ContractedOracle(base, ElementSet(base.ground_size()),
                          filtered.new_to_old);
}

}  // namespace submod
