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

// Concrete monotone submodular objectives: budgeted coverage, modular
// functions, and influence spread over a frozen ensemble of live-edge graphs.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "submod/core.hpp"
#include "submod/rng.hpp"

namespace submod {

// ---------------------------------------------------------------------------
// Budgeted coverage
// ---------------------------------------------------------------------------

// Objects over a universe of words; f(S) counts the distinct words covered.
struct CoverageInstance {
  std::size_t n_words = 0;
  std::vector<std::vector<std::uint32_t>> incidence;  // sorted, unique
  std::vector<double> costs;

  std::size_t n_objects() const { return incidence.size(); }

  // Sorts and dedups every incidence list and validates word ids.
  void normalize() {
    for (auto& words : incidence) {
      std::sort(words.begin(), words.end());
      words.erase(std::unique(words.begin(), words.end()), words.end());
      if (!words.empty() && words.back() >= n_words)
        throw InvalidInstance("word id " + std::to_string(words.back()) +
                              " outside universe of " +
                              std::to_string(n_words));
    }
    if (costs.size() != incidence.size())
      throw InvalidInstance("coverage instance needs one cost per object");
  }

  Instance with_budget(double budget) const { return Instance(costs, budget); }

  friend bool operator==(const CoverageInstance&,
                         const CoverageInstance&) = default;
};

class CoverageOracle : public ValueOracle {
 public:
  explicit CoverageOracle(const CoverageInstance& inst)
      : n_objects_(inst.n_objects()),
        n_words_(inst.n_words),
        stride_((inst.n_words + 63) / 64),
        rows_(n_objects_ * stride_, 0) {
    for (std::size_t v = 0; v < n_objects_; ++v) {
      for (std::uint32_t w : inst.incidence[v]) {
        if (w >= n_words_) throw InvalidInstance("word id out of range");
        rows_[v * stride_ + (w >> 6)] |= std::uint64_t{1} << (w & 63);
      }
    }
  }

  std::size_t ground_size() const override { return n_objects_; }

  std::string describe() const override {
    std::ostringstream out;
    out << "coverage " << n_objects_ << " objects over " << n_words_
        << " words:";
    for (std::size_t v = 0; v < n_objects_; ++v) {
      out << "\n  " << v << ":";
      for (std::size_t w = 0; w < n_words_; ++w)
        if ((row(v)[w >> 6] >> (w & 63)) & 1u) out << ' ' << w;
    }
    return out.str();
  }

 protected:
  double do_evaluate(const ElementSet& s) const override {
    const auto covered = union_of(s);
    std::size_t count = 0;
    for (auto w : covered) count += static_cast<std::size_t>(std::popcount(w));
    return static_cast<double>(count);
  }

  double do_marginal(Element v, const ElementSet& s) const override {
    if (s.contains(v)) return 0.0;
    return gain(v, union_of(s));
  }

  void do_marginals(const ElementSet& s, std::span<const Element> candidates,
                    std::span<double> out) const override {
    const auto covered = union_of(s);
    for (std::size_t i = 0; i < candidates.size(); ++i)
      out[i] = s.contains(candidates[i]) ? 0.0 : gain(candidates[i], covered);
  }

 private:
  const std::uint64_t* row(std::size_t v) const {
    return rows_.data() + v * stride_;
  }

  std::vector<std::uint64_t> union_of(const ElementSet& s) const {
    if (s.universe() != n_objects_)
      throw MisuseError("coverage oracle queried with a foreign set");
    std::vector<std::uint64_t> covered(stride_, 0);
    s.for_each([&](Element v) {
      const auto* r = row(v);
      for (std::size_t i = 0; i < stride_; ++i) covered[i] |= r[i];
    });
    return covered;
  }

  double gain(Element v, const std::vector<std::uint64_t>& covered) const {
    if (v >= n_objects_) throw MalformedSolution("object id out of range");
    const auto* r = row(v);
    std::size_t count = 0;
    for (std::size_t i = 0; i < stride_; ++i)
      count += static_cast<std::size_t>(std::popcount(r[i] & ~covered[i]));
    return static_cast<double>(count);
  }

  std::size_t n_objects_;
  std::size_t n_words_;
  std::size_t stride_;
  std::vector<std::uint64_t> rows_;
};

// Each (object, word) pair is connected independently with probability p.
// Objects get unit costs.
inline CoverageInstance gen_random_bipartite(std::size_t n_objects,
                                             std::size_t n_words, double p,
                                             std::uint64_t seed) {
  if (n_objects == 0 || n_words == 0)
    throw InvalidParameter("bipartite generator needs nV, nW >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidParameter("edge probability must lie in [0, 1]");
  Rng rng(seed);
  CoverageInstance inst;
  inst.n_words = n_words;
  inst.incidence.resize(n_objects);
  inst.costs.assign(n_objects, 1.0);
  for (std::size_t v = 0; v < n_objects; ++v)
    for (std::uint32_t w = 0; w < n_words; ++w)
      if (rng.bernoulli(p)) inst.incidence[v].push_back(w);
  return inst;
}

// ---------------------------------------------------------------------------
// Modular functions
// ---------------------------------------------------------------------------

class ModularOracle : public ValueOracle {
 public:
  explicit ModularOracle(std::vector<double> weights)
      : weights_(std::move(weights)) {
    for (double w : weights_)
      if (!(w >= 0.0)) throw InvalidInstance("modular weights must be >= 0");
  }

  std::size_t ground_size() const override { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  std::string describe() const override {
    std::ostringstream out;
    out.precision(17);
    out << "modular weights:";
    for (double w : weights_) out << ' ' << w;
    return out.str();
  }

 protected:
  double do_evaluate(const ElementSet& s) const override {
    double sum = 0.0;
    s.for_each([&](Element v) { sum += weights_.at(v); });
    return sum;
  }

  double do_marginal(Element v, const ElementSet& s) const override {
    return s.contains(v) ? 0.0 : weights_.at(v);
  }

 private:
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Influence spread under independent cascade
// ---------------------------------------------------------------------------

struct Edge {
  Element from;
  Element to;
  double p;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;

  std::vector<std::size_t> in_degrees() const {
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) ++deg.at(e.to);
    return deg;
  }

  std::vector<std::size_t> out_degrees() const {
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) ++deg.at(e.from);
    return deg;
  }

  friend bool operator==(const Graph&, const Graph&) = default;
};

struct DegreeSetup {
  std::vector<double> probabilities;  // parallel to Graph::edges
  std::vector<double> costs;          // per vertex
};

// p(u,v) = 1 / indeg(v); c(v) = max(gamma * outdeg(v), c_min).
inline DegreeSetup degree_weighted_setup(const Graph& graph,
                                         double gamma = 1.0,
                                         double c_min = 1.0) {
  if (!(c_min > 0.0)) throw InvalidParameter("c_min must be positive");
  if (!(gamma >= 0.0)) throw InvalidParameter("gamma must be non-negative");
  const auto indeg = graph.in_degrees();
  const auto outdeg = graph.out_degrees();
  DegreeSetup setup;
  setup.probabilities.reserve(graph.edges.size());
  for (const auto& e : graph.edges)
    setup.probabilities.push_back(1.0 / static_cast<double>(indeg[e.to]));
  setup.costs.reserve(graph.n);
  for (std::size_t v = 0; v < graph.n; ++v)
    setup.costs.push_back(
        std::max(gamma * static_cast<double>(outdeg[v]), c_min));
  return setup;
}

inline void apply_probabilities(Graph& graph,
                                std::span<const double> probabilities) {
  if (probabilities.size() != graph.edges.size())
    throw InvalidParameter("one probability per edge required");
  for (std::size_t i = 0; i < graph.edges.size(); ++i)
    graph.edges[i].p = probabilities[i];
}

// Directed graph grown by preferential attachment: vertex i links to
// `links_per_vertex` earlier vertices picked proportionally to degree + 1,
// each link oriented at random. Yields the skewed degree profile of social
// graphs. Edge probabilities are left at zero.
inline Graph gen_random_graph(std::size_t n, std::size_t links_per_vertex,
                              std::uint64_t seed) {
  if (n == 0) throw InvalidParameter("graph generator needs n >= 1");
  Rng rng(seed);
  Graph g;
  g.n = n;
  std::vector<Element> urn;  // each vertex once plus once per incident edge
  for (Element v = 0; v < n; ++v) {
    std::vector<Element> picked;
    const std::size_t want = std::min<std::size_t>(links_per_vertex, v);
    while (picked.size() < want) {
      const Element t = urn[rng.below(urn.size())];
      if (std::find(picked.begin(), picked.end(), t) == picked.end())
        picked.push_back(t);
    }
    for (Element t : picked) {
      if (rng.bernoulli(0.5))
        g.edges.push_back({t, v, 0.0});
      else
        g.edges.push_back({v, t, 0.0});
      urn.push_back(t);
      urn.push_back(v);
    }
    urn.push_back(v);
  }
  return g;
}

// Directed Erdos-Renyi graph: each ordered pair (u, v), u != v, is an edge
// with probability `density`. Edge probabilities are left at zero.
inline Graph gen_random_digraph(std::size_t n, double density,
                                std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  g.n = n;
  for (Element u = 0; u < n; ++u)
    for (Element v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(density)) g.edges.push_back({u, v, 0.0});
  return g;
}

// R live-edge subgraphs of a base graph, each stored as an adjacency array.
class LiveEdgeEnsemble {
 public:
  struct Subgraph {
    std::vector<std::uint32_t> offsets;  // size n + 1
    std::vector<Element> targets;
    std::vector<std::uint32_t> edge_ids;  // index into base graph edges
  };

  LiveEdgeEnsemble(Graph graph, std::vector<Subgraph> subgraphs,
                   std::uint64_t seed)
      : graph_(std::move(graph)), subgraphs_(std::move(subgraphs)),
        seed_(seed) {}

  const Graph& graph() const { return graph_; }
  std::size_t size() const { return subgraphs_.size(); }
  std::size_t vertices() const { return graph_.n; }
  const Subgraph& subgraph(std::size_t r) const { return subgraphs_.at(r); }
  std::uint64_t seed() const { return seed_; }

  std::size_t kept_edges() const {
    std::size_t total = 0;
    for (const auto& s : subgraphs_) total += s.targets.size();
    return total;
  }

 private:
  Graph graph_;
  std::vector<Subgraph> subgraphs_;
  std::uint64_t seed_;
};

// Keeps each edge of each of the R subgraphs independently with its
// propagation probability.
inline LiveEdgeEnsemble sample_live_edges(const Graph& graph, std::size_t r,
                                          std::uint64_t seed) {
  if (r == 0) throw InvalidParameter("ensemble size R must be >= 1");
  for (const auto& e : graph.edges) {
    if (!(e.p >= 0.0 && e.p <= 1.0))
      throw InvalidParameter("edge probability outside [0, 1]");
    if (e.from >= graph.n || e.to >= graph.n)
      throw InvalidParameter("edge endpoint outside the vertex set");
  }
  Rng rng(seed);
  std::vector<LiveEdgeEnsemble::Subgraph> subgraphs(r);
  std::vector<std::uint32_t> order(graph.edges.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return graph.edges[a].from < graph.edges[b].from;
  });
  for (auto& sub : subgraphs) {
    sub.offsets.assign(graph.n + 1, 0);
    for (std::uint32_t id : order) {
      const Edge& e = graph.edges[id];
      if (rng.uniform() < e.p) {
        sub.targets.push_back(e.to);
        sub.edge_ids.push_back(id);
        ++sub.offsets[e.from + 1];
      }
    }
    for (std::size_t v = 0; v < graph.n; ++v)
      sub.offsets[v + 1] += sub.offsets[v];
  }
  return LiveEdgeEnsemble(graph, std::move(subgraphs), seed);
}

// f(S) = (1/R) * sum_r |vertices reachable from S in subgraph r|.
//
// When n^2 * R bits fit under `memo_bytes`, the single-source reach set of
// every (subgraph, vertex) pair is precomputed as a bitset and f becomes a
// union of bitsets. Otherwise each query runs a BFS; the reach of the most
// recently queried S is cached so repeated marginal queries against the same
// S only explore newly reached vertices.
class InfluenceOracle : public ValueOracle {
 public:
  static constexpr std::size_t kDefaultMemoBytes = std::size_t{128} << 20;

  explicit InfluenceOracle(LiveEdgeEnsemble ensemble,
                           std::size_t memo_bytes = kDefaultMemoBytes)
      : ens_(std::move(ensemble)),
        n_(ens_.vertices()),
        stride_((n_ + 63) / 64) {
    const double bytes = static_cast<double>(n_) * static_cast<double>(n_) *
                         static_cast<double>(ens_.size()) / 8.0;
    if (bytes <= static_cast<double>(memo_bytes)) build_memo();
  }

  std::size_t ground_size() const override { return n_; }
  bool memoized() const { return !memo_.empty(); }
  const LiveEdgeEnsemble& ensemble() const { return ens_; }

  std::string describe() const override {
    std::ostringstream out;
    out.precision(17);
    out << "influence R=" << ens_.size() << " seed=" << ens_.seed()
        << " n=" << n_ << " edges:";
    for (const auto& e : ens_.graph().edges)
      out << "\n  " << e.from << ' ' << e.to << ' ' << e.p;
    return out.str();
  }

 protected:
  double do_evaluate(const ElementSet& s) const override {
    check(s);
    std::uint64_t total = 0;
    std::vector<std::uint64_t> seen(stride_);
    std::vector<Element> queue;
    for (std::size_t r = 0; r < ens_.size(); ++r) {
      std::fill(seen.begin(), seen.end(), 0);
      if (memoized()) {
        s.for_each([&](Element v) { or_into(seen, reach(r, v)); });
        total += popcount(seen);
      } else {
        total += bfs(r, s, seen, queue);
      }
    }
    return static_cast<double>(total) / static_cast<double>(ens_.size());
  }

  double do_marginal(Element v, const ElementSet& s) const override {
    double out = 0.0;
    const Element c[1] = {v};
    do_marginals(s, c, std::span<double>(&out, 1));
    return out;
  }

  void do_marginals(const ElementSet& s, std::span<const Element> candidates,
                    std::span<double> out) const override {
    check(s);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!(cache_valid_ && cached_set_ == s)) rebuild_cache(s);
    std::vector<std::uint64_t> scratch(stride_);
    std::vector<Element> queue;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const Element v = candidates[i];
      if (v >= n_) throw MalformedSolution("vertex id out of range");
      if (s.contains(v)) {
        out[i] = 0.0;
        continue;
      }
      std::uint64_t gained = 0;
      for (std::size_t r = 0; r < ens_.size(); ++r) {
        const std::uint64_t* covered = cached_cover_.data() + r * stride_;
        if (memoized()) {
          const std::uint64_t* row = reach(r, v);
          for (std::size_t w = 0; w < stride_; ++w)
            gained +=
                static_cast<std::uint64_t>(std::popcount(row[w] & ~covered[w]));
        } else {
          // Covered sets are closed under reachability, so the BFS may stop
          // at any covered vertex.
          if ((covered[v >> 6] >> (v & 63)) & 1u) continue;
          std::copy(covered, covered + stride_, scratch.begin());
          gained += bfs(r, ElementSet::of(n_, {v}), scratch, queue);
        }
      }
      out[i] = static_cast<double>(gained) / static_cast<double>(ens_.size());
    }
  }

 private:
  void check(const ElementSet& s) const {
    if (s.universe() != n_)
      throw MisuseError("influence oracle queried with a foreign set");
  }

  static void or_into(std::vector<std::uint64_t>& acc,
                      const std::uint64_t* row) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] |= row[i];
  }

  static std::uint64_t popcount(const std::vector<std::uint64_t>& bits) {
    std::uint64_t c = 0;
    for (auto w : bits) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  const std::uint64_t* reach(std::size_t r, Element v) const {
    return memo_.data() + (r * n_ + v) * stride_;
  }

  // Marks everything reachable from `sources` that is not yet in `seen`;
  // returns the number of newly marked vertices.
  std::uint64_t bfs(std::size_t r, const ElementSet& sources,
                    std::vector<std::uint64_t>& seen,
                    std::vector<Element>& queue) const {
    const auto& sub = ens_.subgraph(r);
    queue.clear();
    std::uint64_t fresh = 0;
    auto visit = [&](Element v) {
      std::uint64_t& word = seen[v >> 6];
      const std::uint64_t bit = std::uint64_t{1} << (v & 63);
      if (word & bit) return;
      word |= bit;
      ++fresh;
      queue.push_back(v);
    };
    sources.for_each(visit);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Element u = queue[head];
      for (auto i = sub.offsets[u]; i < sub.offsets[u + 1]; ++i)
        visit(sub.targets[i]);
    }
    return fresh;
  }

  void build_memo() {
    memo_.assign(ens_.size() * n_ * stride_, 0);
    std::vector<std::uint64_t> seen(stride_);
    std::vector<Element> queue;
    for (std::size_t r = 0; r < ens_.size(); ++r) {
      for (Element v = 0; v < n_; ++v) {
        std::fill(seen.begin(), seen.end(), 0);
        bfs(r, ElementSet::of(n_, {v}), seen, queue);
        std::copy(seen.begin(), seen.end(),
                  memo_.begin() +
                      static_cast<std::ptrdiff_t>((r * n_ + v) * stride_));
      }
    }
  }

  void rebuild_cache(const ElementSet& s) const {
    cached_cover_.assign(ens_.size() * stride_, 0);
    std::vector<std::uint64_t> seen(stride_);
    std::vector<Element> queue;
    for (std::size_t r = 0; r < ens_.size(); ++r) {
      std::fill(seen.begin(), seen.end(), 0);
      if (memoized())
        s.for_each([&](Element v) { or_into(seen, reach(r, v)); });
      else
        bfs(r, s, seen, queue);
      std::copy(seen.begin(), seen.end(),
                cached_cover_.begin() +
                    static_cast<std::ptrdiff_t>(r * stride_));
    }
    cached_set_ = s;
    cache_valid_ = true;
  }

  LiveEdgeEnsemble ens_;
  std::size_t n_;
  std::size_t stride_;
  std::vector<std::uint64_t> memo_;

  mutable std::mutex cache_mutex_;
  mutable bool cache_valid_ = false;
  mutable ElementSet cached_set_;
  mutable std::vector<std::uint64_t> cached_cover_;
};

}  // namespace submod
