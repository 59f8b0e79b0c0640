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

// Seeded batch of small mixed instances (coverage, modular, influence) that
// are small enough for exhaustive enumeration.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "submod/core.hpp"
#include "submod/objectives.hpp"
#include "submod/rng.hpp"

namespace submod {

enum class ObjectiveKind { kCoverage, kModular, kInfluence };

inline const char* to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::kCoverage:
      return "coverage";
    case ObjectiveKind::kModular:
      return "modular";
    case ObjectiveKind::kInfluence:
      return "influence";
  }
  return "?";
}

// A filtered instance together with an oracle over its ground set.
class SuiteInstance {
 public:
  SuiteInstance(std::string id, ObjectiveKind kind,
                std::unique_ptr<ValueOracle> base, const Instance& raw)
      : id_(std::move(id)),
        kind_(kind),
        base_(std::move(base)),
        filtered_(filter_overweight(raw)),
        raw_total_cost_(raw.total_cost()) {
    if (!filtered_.identity())
      restricted_ = std::make_unique<ContractedOracle>(
          *base_, ElementSet(base_->ground_size()), filtered_.new_to_old);
  }

  const std::string& id() const { return id_; }
  ObjectiveKind kind() const { return kind_; }
  const Instance& instance() const { return filtered_.instance; }
  const ValueOracle& oracle() const {
    return restricted_ ? *restricted_ : *base_;
  }
  // Total cost before overweight elements were dropped.
  double raw_total_cost() const { return raw_total_cost_; }

 private:
  std::string id_;
  ObjectiveKind kind_;
  std::unique_ptr<ValueOracle> base_;
  std::unique_ptr<ContractedOracle> restricted_;
  FilteredInstance filtered_;
  double raw_total_cost_;
};

struct SuiteOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::size_t max_elements = 18;
  std::size_t ensemble_size = 50;
};

namespace detail {

enum class CostModel { kUnit, kRandom, kDegree };

inline std::vector<double> suite_costs(CostModel model, std::size_t n,
                                       Rng& rng) {
  std::vector<double> costs(n, 1.0);
  if (model == CostModel::kRandom)
    for (auto& c : costs) c = rng.uniform(0.2, 2.0);
  return costs;
}

// Budget at a random fraction in [0.1, 1] of the total cost, but never below
// the cheapest element so that filtering leaves something.
inline double suite_budget(const std::vector<double>& costs, Rng& rng) {
  double total = 0.0;
  for (double c : costs) total += c;
  const double cheapest = *std::min_element(costs.begin(), costs.end());
  return std::max(rng.uniform(0.1, 1.0) * total, cheapest);
}

}  // namespace detail

// The i-th instance of the suite; instances are independent of each other so
// any index can be regenerated on its own.
inline SuiteInstance make_suite_instance(const SuiteOptions& options,
                                         std::size_t index) {
  Rng rng(options.seed, index);
  const auto kind = static_cast<ObjectiveKind>(index % 3);
  const auto model = static_cast<detail::CostModel>((index / 3) % 3);
  const std::size_t cap = std::max<std::size_t>(options.max_elements, 4);
  std::string id = std::string(to_string(kind)) + "-" + std::to_string(index);

  switch (kind) {
    case ObjectiveKind::kCoverage: {
      const std::size_t n = static_cast<std::size_t>(
          rng.between(6, static_cast<std::int64_t>(std::min<std::size_t>(cap, 18))));
      const std::size_t m = static_cast<std::size_t>(rng.between(8, 30));
      const double p = rng.uniform(0.05, 0.4);
      CoverageInstance cov = gen_random_bipartite(n, m, p, rng.next());
      cov.costs = detail::suite_costs(
          model == detail::CostModel::kDegree ? detail::CostModel::kRandom
                                              : model,
          n, rng);
      if (model == detail::CostModel::kDegree)
        for (std::size_t v = 0; v < n; ++v)
          cov.costs[v] = std::max(1.0, static_cast<double>(cov.incidence[v].size()) / 2.0);
      const double b = detail::suite_budget(cov.costs, rng);
      return SuiteInstance(std::move(id), kind,
                           std::make_unique<CoverageOracle>(cov),
                           Instance(cov.costs, b));
    }
    case ObjectiveKind::kModular: {
      const std::size_t n = static_cast<std::size_t>(
          rng.between(4, static_cast<std::int64_t>(std::min<std::size_t>(cap, 18))));
      std::vector<double> weights(n);
      for (auto& w : weights) w = rng.uniform(0.0, 10.0);
      std::vector<double> costs = detail::suite_costs(
          model == detail::CostModel::kDegree ? detail::CostModel::kRandom
                                              : model,
          n, rng);
      if (model == detail::CostModel::kDegree)
        for (std::size_t v = 0; v < n; ++v)
          costs[v] = 0.2 + weights[v] * rng.uniform(0.1, 0.3);
      const double b = detail::suite_budget(costs, rng);
      return SuiteInstance(std::move(id), kind,
                           std::make_unique<ModularOracle>(std::move(weights)),
                           Instance(std::move(costs), b));
    }
    case ObjectiveKind::kInfluence: {
      const std::size_t n = static_cast<std::size_t>(
          rng.between(5, static_cast<std::int64_t>(std::min<std::size_t>(cap, 12))));
      Graph g = gen_random_digraph(n, rng.uniform(0.1, 0.4), rng.next());
      const DegreeSetup setup = degree_weighted_setup(g);
      apply_probabilities(g, setup.probabilities);
      std::vector<double> costs =
          model == detail::CostModel::kDegree
              ? setup.costs
              : detail::suite_costs(model, n, rng);
      const double b = detail::suite_budget(costs, rng);
      auto oracle = std::make_unique<InfluenceOracle>(
          sample_live_edges(g, options.ensemble_size, rng.next()));
      return SuiteInstance(std::move(id), kind, std::move(oracle),
                           Instance(std::move(costs), b));
    }
  }
  throw InvalidParameter("unknown objective kind");
}

}  // namespace submod
