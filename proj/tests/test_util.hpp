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

// Reference implementations used as test oracles. They share no code with the
// library beyond the data types and favor obviousness over speed.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "submod/core.hpp"
#include "submod/objectives.hpp"
#include "submod/rng.hpp"

namespace submod::testing {

// Set function given by a plain callable over sorted member lists.
class LambdaOracle : public ValueOracle {
 public:
  using Fn = std::function<double(const std::vector<Element>&)>;
  LambdaOracle(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}
  std::size_t ground_size() const override { return n_; }

 protected:
  double do_evaluate(const ElementSet& s) const override {
    return fn_(s.members());
  }

 private:
  std::size_t n_;
  Fn fn_;
};

inline double naive_coverage(const CoverageInstance& inst,
                             const std::vector<Element>& members) {
  std::set<std::uint32_t> covered;
  for (Element v : members)
    covered.insert(inst.incidence.at(v).begin(), inst.incidence.at(v).end());
  return static_cast<double>(covered.size());
}

// Mean reachable-set size, by an independent BFS over each subgraph's edge
// list taken from the base graph.
inline double naive_influence(const LiveEdgeEnsemble& ens,
                              const std::vector<Element>& seeds) {
  const Graph& g = ens.graph();
  double total = 0.0;
  for (std::size_t r = 0; r < ens.size(); ++r) {
    std::vector<std::vector<Element>> adj(g.n);
    for (auto id : ens.subgraph(r).edge_ids)
      adj[g.edges[id].from].push_back(g.edges[id].to);
    std::vector<bool> seen(g.n, false);
    std::queue<Element> q;
    for (Element s : seeds)
      if (!seen[s]) {
        seen[s] = true;
        q.push(s);
      }
    while (!q.empty()) {
      const Element u = q.front();
      q.pop();
      for (Element v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
    }
    total += static_cast<double>(std::count(seen.begin(), seen.end(), true));
  }
  return total / static_cast<double>(ens.size());
}

// Exact optimum of the fractional knapsack LP by enumerating its vertices:
// some set T of items at 1 and at most one further item at a fractional level.
inline double lp_knapsack(const std::vector<double>& w,
                          const std::vector<double>& c, double budget) {
  const std::size_t n = w.size();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double cost = 0.0, value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        cost += c[i];
        value += w[i];
      }
    if (cost > budget + 1e-12) continue;
    best = std::max(best, value);
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) continue;
      const double x = std::min(1.0, (budget - cost) / c[j]);
      best = std::max(best, value + x * w[j]);
    }
  }
  return best;
}

// max f(S) over feasible S with A <= S <= B.
inline double node_optimum(const ValueOracle& f, const Instance& inst,
                           const ElementSet& a, const ElementSet& b) {
  const std::vector<Element> free_elems = (b - a).members();
  double best = -1.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_elems.size());
       ++mask) {
    ElementSet s = a;
    for (std::size_t i = 0; i < free_elems.size(); ++i)
      if (mask >> i & 1) s.insert(free_elems[i]);
    if (cost(inst, s) > inst.budget() + 1e-12) continue;
    best = std::max(best, f.evaluate(s));
  }
  return best;
}

inline ElementSet random_subset(std::size_t n, double density, Rng& rng) {
  ElementSet s(n);
  for (Element v = 0; v < n; ++v)
    if (rng.bernoulli(density)) s.insert(v);
  return s;
}

// Random S <= T and v outside T.
struct Triple {
  ElementSet s, t;
  Element v;
};

inline Triple random_triple(std::size_t n, Rng& rng) {
  for (;;) {
    ElementSet t = random_subset(n, rng.uniform(0.0, 0.8), rng);
    if (t.size() == n) continue;
    ElementSet s(n);
    t.for_each([&](Element x) {
      if (rng.bernoulli(0.5)) s.insert(x);
    });
    Element v;
    do {
      v = static_cast<Element>(rng.below(n));
    } while (t.contains(v));
    return {s, t, v};
  }
}

}  // namespace submod::testing
