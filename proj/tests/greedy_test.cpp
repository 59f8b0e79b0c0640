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

#include "submod/greedy.hpp"

#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "submod/analysis.hpp"
#include "submod/exact.hpp"
#include "submod/objectives.hpp"
#include "submod/suite.hpp"
#include "test_util.hpp"

namespace submod {
namespace {

// Two elements where the cheap one wins on ratio but the expensive one alone
// is optimal.
struct CheapTrap {
  ModularOracle f{{1.0, 0.5}};
  Instance inst{{1.0, 0.25}, 1.0};
};

// Three elements on which the modified greedy attains exactly 0.6 of OPT.
struct TightInstance {
  ModularOracle f{{1.0, 1.0, 1.2}};
  Instance inst{{1.0, 1.0, 1.1}, 2.0};
};

void ExpectTraceInvariants(const ValueOracle& f, const Instance& inst,
                           const GreedyTrace& t) {
  EXPECT_EQ(t.value_at(0), 0.0);
  for (std::size_t i = 1; i <= t.added.size(); ++i) {
    EXPECT_GE(t.value_at(i), t.value_at(i - 1) - 1e-9);
    EXPECT_LE(t.cost_at(i), inst.budget() + 1e-12);
    EXPECT_EQ(t.value_at(i), f.evaluate(t.prefix(i)));
  }
  for (const auto& r : t.abandoned)
    EXPECT_GT(t.cost_at(r.step) + inst.cost(r.element), inst.budget() + 1e-12);
  EXPECT_EQ(t.order.size(), inst.size());
  EXPECT_EQ(t.greedy_set, t.prefix(t.added.size()));
  EXPECT_EQ(t.selected_value(), f.evaluate(t.selected));
  EXPECT_GE(t.selected_value(), t.greedy_value());
  for (Element v = 0; v < inst.size(); ++v)
    EXPECT_GE(t.selected_value(), f.evaluate(ElementSet::of(inst.size(), {v})));
}

// Each considered element has the best ratio, against the prefix current at
// that moment, among everything considered after it.
void ExpectGreedyCertificate(const ValueOracle& f, const Instance& inst,
                             const GreedyTrace& t) {
  for (std::size_t p = 0; p < t.order.size(); ++p) {
    const auto& here = t.order[p];
    const ElementSet s = t.prefix(here.step);
    const double r_here = f.marginal(here.element, s) / inst.cost(here.element);
    for (std::size_t q = p + 1; q < t.order.size(); ++q) {
      const Element v = t.order[q].element;
      EXPECT_GE(r_here, f.marginal(v, s) / inst.cost(v) - 1e-9);
    }
  }
}

void ExpectSameTrace(const GreedyTrace& a, const GreedyTrace& b) {
  ASSERT_EQ(a.order.size(), b.order.size());
  for (std::size_t i = 0; i < a.order.size(); ++i) {
    EXPECT_EQ(a.order[i].element, b.order[i].element);
    EXPECT_EQ(a.order[i].added, b.order[i].added);
    EXPECT_EQ(a.order[i].step, b.order[i].step);
  }
  ASSERT_EQ(a.added.size(), b.added.size());
  for (std::size_t i = 0; i < a.added.size(); ++i) {
    EXPECT_EQ(a.added[i].element, b.added[i].element);
    EXPECT_EQ(a.added[i].value, b.added[i].value);
  }
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.best_singleton, b.best_singleton);
}

TEST(MGreedyTest, CheapTrap) {
  CheapTrap c;
  const GreedyTrace t = mgreedy(c.f, c.inst);
  ASSERT_EQ(t.added.size(), 1u);
  EXPECT_EQ(t.added[0].element, 1u);
  ASSERT_EQ(t.abandoned.size(), 1u);
  EXPECT_EQ(t.abandoned[0].element, 0u);
  EXPECT_EQ(t.best_singleton, 0u);
  EXPECT_TRUE(t.selected_is_singleton);
  EXPECT_EQ(t.selected, ElementSet::of(2, {0}));
  EXPECT_EQ(t.selected_value(), 1.0);
  EXPECT_EQ(brute_force(c.f, c.inst).value, 1.0);
}

TEST(MGreedyTest, TightInstance) {
  TightInstance c;
  const GreedyTrace t = mgreedy(c.f, c.inst);
  EXPECT_EQ(t.greedy_set, ElementSet::of(3, {2}));
  EXPECT_EQ(t.best_singleton, 2u);
  EXPECT_EQ(t.selected, ElementSet::of(3, {2}));
  EXPECT_DOUBLE_EQ(t.selected_value(), 1.2);
  const ExactSolution opt = brute_force(c.f, c.inst);
  EXPECT_EQ(opt.value, 2.0);
  EXPECT_DOUBLE_EQ(t.selected_value() / opt.value, 0.6);
}

TEST(MGreedyTest, SingleElement) {
  const ModularOracle f({3.0});
  const GreedyTrace t = mgreedy(f, Instance({0.5}, 1.0));
  EXPECT_EQ(t.selected, ElementSet::of(1, {0}));
  EXPECT_EQ(t.selected_value(), 3.0);
}

TEST(MGreedyTest, TiesGoToLowerId) {
  const ModularOracle f({1.0, 2.0, 2.0});
  const GreedyTrace t = mgreedy(f, Instance({1.0, 2.0, 2.0}, 2.0));
  EXPECT_EQ(t.order[0].element, 0u);
  EXPECT_EQ(t.order[1].element, 1u);
  EXPECT_FALSE(t.order[1].added);
  EXPECT_EQ(t.best_singleton, 1u);
  EXPECT_EQ(t.selected, ElementSet::of(3, {1}));
}

TEST(MGreedyTest, RejectsUnfilteredInstance) {
  const ModularOracle f({1.0, 1.0});
  EXPECT_THROW(mgreedy(f, Instance({1.0, 3.0}, 2.0)), MisuseError);
  EXPECT_THROW(mgreedy(f, Instance({1.0}, 2.0)), MisuseError);
}

TEST(MGreedyTest, RejectsDecreasingOracle) {
  const testing::LambdaOracle f(3, [](const std::vector<Element>& m) {
    return m.size() == 2 ? 0.5 : static_cast<double>(m.size());
  });
  EXPECT_THROW(mgreedy(f, Instance({1.0, 1.0, 1.0}, 3.0)), NonMonotoneOracle);
}

TEST(MGreedyTest, ClipsTinyNegativeMarginals) {
  const testing::LambdaOracle f(2, [](const std::vector<Element>& m) {
    return m.size() == 2 ? 1.0 - 1e-12 : static_cast<double>(m.size());
  });
  const GreedyTrace t = mgreedy(f, Instance({1.0, 1.0}, 2.0));
  EXPECT_EQ(t.added.size(), 2u);
}

TEST(MGreedyTest, InvariantsAndCertificateOnSuite) {
  SuiteOptions opts;
  opts.max_elements = 14;
  for (std::size_t i = 0; i < 90; ++i) {
    const SuiteInstance s = make_suite_instance(opts, i);
    const GreedyTrace t = mgreedy(s.oracle(), s.instance());
    SCOPED_TRACE(s.id());
    ExpectTraceInvariants(s.oracle(), s.instance(), t);
    ExpectGreedyCertificate(s.oracle(), s.instance(), t);
  }
}

TEST(MGreedyTest, ApproximationOnBruteForceableInstances) {
  const Constants k = solve_constants();
  SuiteOptions opts;
  for (std::size_t i = 0; i < 150; ++i) {
    const SuiteInstance s = make_suite_instance(opts, i);
    const double opt = brute_force(s.oracle(), s.instance()).value;
    const double got = mgreedy(s.oracle(), s.instance()).selected_value();
    EXPECT_GE(got, k.bot() * opt - 1e-9) << s.id();
  }
}

TEST(LazyGreedyTest, ModularTraceIdentical) {
  Rng rng(4);
  std::vector<double> w(30), c(30);
  for (auto& x : w) x = rng.uniform(0, 10);
  for (auto& x : c) x = rng.uniform(0.2, 2);
  const ModularOracle f(w);
  const Instance inst(c, 8.0);
  f.reset_calls();
  const GreedyTrace eager = mgreedy(f, inst);
  const GreedyTrace lazy = lazy_mgreedy(f, inst);
  ExpectSameTrace(eager, lazy);
  EXPECT_FALSE(lazy.submodularity_warning);
  EXPECT_LE(lazy.oracle_calls, eager.oracle_calls);
}

TEST(LazyGreedyTest, CoverageTracesMatch) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CoverageInstance cov = gen_random_bipartite(60, 80, 0.05, seed);
    Rng rng(seed, 3);
    if (seed % 2)
      for (auto& c : cov.costs) c = rng.uniform(0.3, 2.0);
    const CoverageOracle f(cov);
    const Instance inst(cov.costs, 10.0);
    const GreedyTrace eager = mgreedy(f, inst);
    const GreedyTrace lazy = lazy_mgreedy(f, inst);
    SCOPED_TRACE(seed);
    ExpectSameTrace(eager, lazy);
    EXPECT_FALSE(lazy.submodularity_warning);
    EXPECT_LE(lazy.oracle_calls, eager.oracle_calls);
  }
}

TEST(LazyGreedyTest, SupermodularMockRaisesWarning) {
  const testing::LambdaOracle f(6, [](const std::vector<Element>& m) {
    return static_cast<double>(m.size() * m.size());
  });
  const Instance inst(std::vector<double>(6, 1.0), 4.0);
  const GreedyTrace lazy = lazy_mgreedy(f, inst);
  EXPECT_TRUE(lazy.submodularity_warning);
  EXPECT_FALSE(lazy.warnings.empty());
  EXPECT_EQ(lazy.greedy_set, mgreedy(f, inst).greedy_set);
}

TEST(ExtensionTest, Examples) {
  const ModularOracle f({2.0, 1.0});
  const GreedyTrace t = mgreedy(f, Instance({1.0, 1.0}, 2.0));
  EXPECT_EQ(eval_extension(t, 0.0), 0.0);
  EXPECT_EQ(eval_extension(t, 0.5), 1.0);
  EXPECT_EQ(eval_extension(t, 1.0), 2.0);
  EXPECT_EQ(eval_extension(t, 1.5), 2.5);
  EXPECT_EQ(eval_extension(t, 2.0), 3.0);
  EXPECT_THROW(eval_extension(t, -0.1), DomainError);
  EXPECT_THROW(eval_extension(t, 2.5), DomainError);
}

TEST(ExtensionTest, HitsPrefixValuesAndIsConcave) {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CoverageInstance cov = gen_random_bipartite(25, 60, 0.1, seed);
    for (auto& c : cov.costs) c = rng.uniform(0.2, 2.0);
    const CoverageOracle f(cov);
    const GreedyTrace t = mgreedy(f, Instance(cov.costs, 6.0));
    const ContinuousExtension F(t);
    for (std::size_t i = 0; i <= t.added.size(); ++i)
      EXPECT_EQ(F(t.cost_at(i)), t.value_at(i));
    const double end = F.domain_end();
    for (int k = 0; k < 200; ++k) {
      double x[3] = {rng.uniform(0, end), rng.uniform(0, end),
                     rng.uniform(0, end)};
      std::sort(x, x + 3);
      if (x[1] - x[0] < 1e-6 || x[2] - x[1] < 1e-6) continue;
      const double s1 = (F(x[1]) - F(x[0])) / (x[1] - x[0]);
      const double s2 = (F(x[2]) - F(x[1])) / (x[2] - x[1]);
      EXPECT_GE(s1, s2 - 1e-9);
      EXPECT_GE(s2, -1e-9);
    }
  }
}

TEST(TraceDumpTest, WritesEveryConsideration) {
  CheapTrap c;
  std::ostringstream out;
  write_trace(out, mgreedy(c.f, c.inst));
  const std::string text = out.str();
  EXPECT_NE(text.find("add 1 at 0"), std::string::npos);
  EXPECT_NE(text.find("reject 0 at 1"), std::string::npos);
  EXPECT_NE(text.find("selected singleton value 1"), std::string::npos);
}

}  // namespace
}  // namespace submod
