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

// Runtime checks of the approximation analysis of the modified greedy:
// the guarantee constants as roots of their defining equations, sampling
// attacks on the two lower-bound programs, and a trace checker that evaluates
// every intermediate inequality on a concrete instance with a known optimum.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "submod/bounds.hpp"
#include "submod/core.hpp"
#include "submod/exact.hpp"
#include "submod/greedy.hpp"
#include "submod/rng.hpp"

namespace submod {

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

struct Root {
  double value = 0.0;
  // Certificate: the defining function at value - tol and value + tol.
  double below = 0.0;
  double above = 0.0;
  double f_below = 0.0;
  double f_above = 0.0;

  bool certified() const {
    return (f_below < 0.0 && f_above > 0.0) || (f_below > 0.0 && f_above < 0.0);
  }
};

// Bisection on [lo, hi]; fn(lo) and fn(hi) must have opposite signs.
inline Root bisect(const std::function<double(double)>& fn, double lo,
                   double hi, double tol) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if (f_lo == 0.0 || f_hi == 0.0) {
    const double r = f_lo == 0.0 ? lo : hi;
    return {r, r - tol, r + tol, fn(r - tol), fn(r + tol)};
  }
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw BracketingError("bracket [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] does not change sign");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fn(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double r = 0.5 * (lo + hi);
  return {r, r - tol, r + tol, fn(r - tol), fn(r + tol)};
}

// (1 - a) ln(1 - a) + (2 - 1/e)(1 - 2a)
inline double alpha_bot_equation(double a) {
  return (1.0 - a) * std::log(1.0 - a) +
         (2.0 - std::exp(-1.0)) * (1.0 - 2.0 * a);
}

// (1 - a)(ln(1 - a) + 2) - 1
inline double alpha_prime_equation(double a) {
  return (1.0 - a) * (std::log(1.0 - a) + 2.0) - 1.0;
}

// e^x + x - 2
inline double beta_equation(double x) { return std::exp(x) + x - 2.0; }

struct Constants {
  Root alpha_bot;     // guarantee of the modified greedy
  Root alpha_prime;   // guarantee of f(S_m) against lambda
  Root beta;
  double one_minus_inv_sqrt_e = 0.0;
  double one_minus_inv_e = 0.0;

  double bot() const { return alpha_bot.value; }
  double prime() const { return alpha_prime.value; }
};

inline Constants solve_constants(double tolerance = 1e-12) {
  if (!(tolerance > 0.0) || tolerance > 1e-6)
    throw InvalidParameter("tolerance must lie in (0, 1e-6]");
  Constants c;
  c.alpha_bot = bisect(alpha_bot_equation, 0.0, 0.5, tolerance);
  c.alpha_prime = bisect(alpha_prime_equation, 0.0, 0.5, tolerance);
  c.beta = bisect(beta_equation, 0.0, 1.0, tolerance);
  c.one_minus_inv_sqrt_e = 1.0 - std::exp(-0.5);
  c.one_minus_inv_e = 1.0 - std::exp(-1.0);
  return c;
}

// ---------------------------------------------------------------------------
// Lower-bound programs
// ---------------------------------------------------------------------------

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct FalsificationResult {
  double min_alpha = kInf;          // smallest feasible alpha encountered
  std::vector<double> argmin;       // the point attaining it
  std::uint64_t samples = 0;
  std::uint64_t feasible = 0;
  double lower_bound = 0.0;         // the proven bound being attacked
  bool holds = true;                // min_alpha >= lower_bound - 1e-6
};

namespace detail {

// a / b with b == 0 read as a limit: 0 when a == 0, +inf otherwise.
inline double limit_div(double a, double b) {
  if (b != 0.0) return a / b;
  return a == 0.0 ? 0.0 : kInf;
}

// coef * x where x may be +inf; the zero coefficient wins.
inline double limit_mul(double coef, double x) {
  if (std::isinf(x)) return coef > 0.0 ? kInf : (coef < 0.0 ? -kInf : 0.0);
  return coef * x;
}

struct MainTerms {
  bool feasible = false;
  double increasing = 0.0;   // max of the x1-increasing lower bounds minus x1
  double x2_bound = 0.0;
  double k = 0.0;            // (x4 + x5 + x6 - 1) x2 / x5
  double x1_floor = 0.0;
};

// Terms of the seven-variable program that do not depend on x1.
inline MainTerms main_terms(const std::array<double, 6>& x) {
  const double x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4], x6 = x[5];
  MainTerms t;
  if (x4 + x5 < 1.0) return t;
  const double ratio = limit_div(x2, x5);
  // x1 + x2/x5 >= 1 and x1 + x2 + x3 >= 1 and x1 >= 1 - e^{-x4}.
  t.x1_floor = std::max({1.0 - std::exp(-x4), 1.0 - x2 - x3,
                         std::isinf(ratio) ? -kInf : 1.0 - ratio, 0.0});
  if (t.x1_floor > 1.0) return t;
  t.k = limit_mul(x4 + x5 + x6 - 1.0, ratio);
  if (std::isinf(t.k) && t.k > 0.0) return t;
  // With x4 = 0 the exponential term has no finite reading and is dropped.
  t.increasing = 0.0;
  if (x4 > 0.0)
    t.increasing = std::max(0.0, (1.0 - std::exp((x4 + x6 - 1.0) / x4)) * x3);
  t.x2_bound = x2;
  t.feasible = true;
  return t;
}

inline double main_alpha(const MainTerms& t, double x1) {
  const double b = 2.0 * (1.0 - std::exp(-1.0));
  const double from_singleton =
      std::isinf(t.k) ? -kInf : ((1.0 - std::exp(-1.0)) + t.k - x1) / b;
  return std::max({x1 + t.increasing, t.x2_bound, from_singleton, 0.0});
}

// Minimal alpha at a point, or +inf when the point is infeasible.
inline double main_alpha_at(const std::array<double, 6>& x) {
  const MainTerms t = main_terms(x);
  if (!t.feasible || x[0] < t.x1_floor) return kInf;
  const double a = main_alpha(t, x[0]);
  return a <= 1.0 ? a : kInf;
}

// Best x1 for the remaining coordinates: alpha is the max of an increasing
// and a decreasing linear function of x1, so the optimum is their crossing
// clamped to the feasible interval.
inline double main_best_x1(const MainTerms& t) {
  const double b = 2.0 * (1.0 - std::exp(-1.0));
  double x1 = t.x1_floor;
  if (!std::isinf(t.k)) {
    const double cross =
        ((1.0 - std::exp(-1.0)) + t.k - b * t.increasing) / (1.0 + b);
    x1 = std::clamp(cross, t.x1_floor, 1.0);
  }
  return x1;
}

inline double simple_alpha_at(const std::array<double, 3>& x) {
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  if (x1 < 1.0 - std::exp(-x3)) return kInf;
  const double coef = 1.0 - limit_div(x3, 1.0 - x3);
  const double a = std::max({x1, 1.0 - x1 - x2, x1 + limit_mul(coef, x2), 0.0});
  return a <= 1.0 ? a : kInf;
}

inline double simple_best_x1(double x2, double x3) {
  const double floor = 1.0 - std::exp(-x3);
  const double coef = 1.0 - limit_div(x3, 1.0 - x3);
  const double m = std::max(0.0, limit_mul(coef, x2));
  if (std::isinf(m)) return floor;
  return std::clamp((1.0 - x2 - m) / 2.0, floor, 1.0);
}

// Shared sampling driver: a full grid, uniform random points, then a local
// search that shrinks its step around the incumbent.
template <std::size_t D, typename Eval, typename Improve>
FalsificationResult falsify(std::uint64_t samples, std::uint64_t seed,
                            std::size_t grid_levels, Eval&& eval,
                            Improve&& improve) {
  FalsificationResult out;
  std::array<double, D> best{};
  auto consider = [&](std::array<double, D> x) {
    ++out.samples;
    double a = eval(x);
    if (std::isfinite(a)) ++out.feasible;
    std::array<double, D> y = x;
    if (improve(y)) {
      ++out.samples;
      const double b = eval(y);
      if (b < a) {
        a = b;
        x = y;
      }
    }
    if (a < out.min_alpha) {
      out.min_alpha = a;
      best = x;
    }
  };

  std::uint64_t grid = 1;
  for (std::size_t d = 0; d < D; ++d) grid *= grid_levels;
  const std::uint64_t grid_budget = std::min<std::uint64_t>(grid, samples / 4);
  for (std::uint64_t g = 0; g < grid_budget; ++g) {
    std::array<double, D> x{};
    std::uint64_t rest = g;
    for (std::size_t d = 0; d < D; ++d) {
      x[d] = static_cast<double>(rest % grid_levels) /
             static_cast<double>(grid_levels - 1);
      rest /= grid_levels;
    }
    consider(x);
  }

  Rng rng(seed);
  const std::uint64_t local = samples / 4;
  while (out.samples + local < samples) {
    std::array<double, D> x{};
    for (auto& v : x) v = rng.uniform();
    consider(x);
  }

  double step = 0.1;
  while (out.samples < samples) {
    std::array<double, D> x = best;
    for (auto& v : x) v = std::clamp(v + step * (2.0 * rng.uniform() - 1.0), 0.0, 1.0);
    const double before = out.min_alpha;
    consider(x);
    if (!(out.min_alpha < before)) step = std::max(step * 0.999, 1e-7);
  }
  out.argmin.assign(best.begin(), best.end());
  return out;
}

}  // namespace detail

// Attacks the seven-variable program whose minimum lower-bounds the
// approximation ratio: (x1..x6) = (f(Q), f(o|Q), f(OPT'|Q)) / f(OPT) and
// (c(Q), c(o), c(o')) / b.
inline FalsificationResult falsify_program_main(std::uint64_t samples,
                                                std::uint64_t seed,
                                                double lower_bound) {
  if (samples == 0) throw InvalidParameter("samples must be positive");
  auto improve = [](std::array<double, 6>& x) {
    const detail::MainTerms t = detail::main_terms(x);
    if (!t.feasible) return false;
    x[0] = detail::main_best_x1(t);
    return true;
  };
  FalsificationResult r =
      detail::falsify<6>(samples, seed, 10, detail::main_alpha_at, improve);
  r.lower_bound = lower_bound;
  r.holds = r.min_alpha >= lower_bound - 1e-6;
  return r;
}

// Attacks the four-variable program behind the 1 - 1/sqrt(e) guarantee:
// (x1, x2) = (f(Q), f(OPT'|Q)) / f(OPT), x3 = c(Q) / b.
inline FalsificationResult falsify_program_simple(std::uint64_t samples,
                                                  std::uint64_t seed,
                                                  double lower_bound) {
  if (samples == 0) throw InvalidParameter("samples must be positive");
  auto improve = [](std::array<double, 3>& x) {
    x[0] = detail::simple_best_x1(x[1], x[2]);
    return true;
  };
  FalsificationResult r =
      detail::falsify<3>(samples, seed, 101, detail::simple_alpha_at, improve);
  r.lower_bound = lower_bound;
  r.holds = r.min_alpha >= lower_bound - 1e-6;
  return r;
}

// ---------------------------------------------------------------------------
// Proof-trace checker
// ---------------------------------------------------------------------------

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;   // lhs - rhs, minimized over all evaluated instances
  bool skipped = false;
  std::string reason;
  std::size_t evaluations = 0;
};

struct ProofWitness {
  ElementSet opt;
  double opt_value = 0.0;
  double opt_cost = 0.0;
  std::optional<Element> first_rejected;    // o
  std::optional<Element> second_rejected;   // o'
  ElementSet first_prefix;                  // Q
  ElementSet second_prefix;                 // Q'
  double greedy_value = 0.0;
  double selected_value = 0.0;
  double ratio = 1.0;                       // f(S_m) / f(OPT)
  std::vector<InequalityCheck> checks;

  const InequalityCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct TraceCheckOptions {
  double tolerance = 1e-9;
  BoundOptions bound;     // forwarded to the lambda computation
  bool cardinality = true;
};

namespace detail {

class CheckSink {
 public:
  explicit CheckSink(ProofWitness& w) : w_(w) {}

  void check(const std::string& name, double lhs, double rhs) {
    InequalityCheck& c = slot(name);
    const double slack = lhs - rhs;
    if (c.evaluations == 0 || slack < c.slack) {
      c.lhs = lhs;
      c.rhs = rhs;
      c.slack = slack;
    }
    c.skipped = false;
    c.reason.clear();
    ++c.evaluations;
  }

  void skip(const std::string& name, const std::string& reason) {
    InequalityCheck& c = slot(name);
    if (c.evaluations == 0) {
      c.skipped = true;
      c.reason = reason;
    }
  }

 private:
  InequalityCheck& slot(const std::string& name) {
    for (auto& c : w_.checks)
      if (c.name == name) return c;
    w_.checks.push_back({name, 0.0, 0.0, 0.0, false, "", 0});
    return w_.checks.back();
  }

  ProofWitness& w_;
};

inline double one_minus_exp(double x) { return -std::expm1(x); }

}  // namespace detail

// Evaluates every intermediate inequality of the analysis on one instance.
// Dummy rejected elements have zero cost and zero cost-effectiveness; the
// inequalities stay well defined with that convention and are evaluated.
inline ProofWitness trace_inequalities(const ValueOracle& oracle,
                                       const Instance& instance,
                                       const Constants& constants,
                                       const TraceCheckOptions& options = {}) {
  detail::require_ready(oracle, instance);
  const double b = instance.budget();
  const double e1 = 1.0 - std::exp(-1.0);

  ProofWitness w;
  detail::CheckSink sink(w);

  const BoundedRun run = mgreedy_ub(oracle, instance, options.bound);
  const GreedyTrace& trace = run.trace;
  const ExactSolution opt = brute_force(oracle, instance);
  w.opt = opt.set;
  w.opt_value = opt.value;
  w.opt_cost = cost(instance, opt.set);
  w.greedy_value = trace.greedy_value();
  w.selected_value = trace.selected_value();
  w.ratio = detail::safe_ratio(w.selected_value, w.opt_value);
  const double f_opt = w.opt_value;
  const double f_sg = w.greedy_value;
  const std::size_t k = trace.added.size();

  // o, o' and the prefixes Q, Q' built when they were considered.
  std::size_t q_len = k, q2_len = k;
  for (const auto& r : trace.abandoned) {
    if (!opt.set.contains(r.element)) continue;
    if (!w.first_rejected) {
      w.first_rejected = r.element;
      q_len = r.step;
    } else {
      w.second_rejected = r.element;
      q2_len = r.step;
      break;
    }
  }
  w.first_prefix = trace.prefix(q_len);
  w.second_prefix = trace.prefix(q2_len);
  const ElementSet& q = w.first_prefix;
  const double c_q = trace.cost_at(q_len);
  const double f_q = trace.value_at(q_len);
  const double c_o = w.first_rejected ? instance.cost(*w.first_rejected) : 0.0;
  const double c_o2 =
      w.second_rejected ? instance.cost(*w.second_rejected) : 0.0;
  const double gain_o =
      w.first_rejected ? oracle.marginal(*w.first_rejected, q) : 0.0;
  const double ratio_o = w.first_rejected ? gain_o / c_o : 0.0;

  // OPT' = OPT \ (Q + o) and f(OPT' | Q).
  ElementSet opt_rest = opt.set - q;
  if (w.first_rejected) opt_rest.erase(*w.first_rejected);
  const double f_opt_rest_q = oracle.evaluate(q | opt_rest) - f_q;

  // Bounds: soundness and the guarantee against lambda.
  sink.check("lambda_upper_bounds_opt", run.report.lambda, f_opt);
  sink.check("lambda_within_guarantee", run.report.f_sm,
             constants.prime() * run.report.lambda);
  sink.check("lambda_below_leskovec", run.report.leskovec, run.report.lambda);

  // Every greedy prefix against the part of OPT not yet abandoned.
  for (std::size_t i = 0; i <= k; ++i) {
    const ElementSet t = opt.set - trace.abandoned_until(i);
    const double c_t = cost(instance, t);
    const double rhs =
        c_t > 0.0 ? detail::one_minus_exp(-trace.cost_at(i) / c_t) *
                        oracle.evaluate(t)
                  : 0.0;
    sink.check("prefix_vs_unabandoned_opt", trace.value_at(i), rhs);
  }

  sink.check("greedy_vs_first_rejection", f_sg,
             detail::one_minus_exp(-c_q / b) * f_opt);

  if (c_q > 0.0) {
    sink.check("greedy_vs_second_rejection", f_sg,
               f_q + detail::one_minus_exp((c_q + c_o2 - b) / c_q) *
                         f_opt_rest_q);
  } else {
    sink.skip("greedy_vs_second_rejection", "c(Q) = 0");
  }

  sink.check("best_singleton",
             trace.best_singleton_value,
             f_opt / 2.0 + (ratio_o * (c_q + c_o + c_o2 - b) - f_q) /
                               (2.0 * e1));

  if (std::abs(b - c_q) > kBudgetSlack) {
    sink.check("greedy_vs_residual_budget", f_sg,
               f_q + (1.0 - c_q / (b - c_q)) * f_opt_rest_q);
  } else {
    sink.skip("greedy_vs_residual_budget", "c(Q) = b");
  }

  if (w.opt_cost < b - kBudgetSlack) {
    sink.check("greedy_vs_light_opt", f_sg, (1.0 - w.opt_cost / b) * f_opt);
  } else {
    sink.skip("greedy_vs_light_opt", "c(OPT) = b");
  }

  // Continuous extension at breakpoints and midpoints.
  const ContinuousExtension extension(trace);
  for (std::size_t j = 0; j < k; ++j) {
    const ElementSet t = opt.set - trace.abandoned_until(j + 1);
    const double c_t = cost(instance, t);
    const double f_t = oracle.evaluate(t);
    const double lo = trace.cost_at(j), hi = trace.cost_at(j + 1);
    for (double x : {0.5 * (lo + hi), hi}) {
      const double rhs =
          c_t > 0.0 ? detail::one_minus_exp(-x / c_t) * f_t : 0.0;
      sink.check("extension_vs_unabandoned_opt", extension(x), rhs);
    }
  }
  if (k == 0) sink.skip("extension_vs_unabandoned_opt", "empty greedy chain");

  sink.check("ratio_alpha_bot", w.selected_value, constants.bot() * f_opt);
  sink.check("ratio_one_minus_inv_sqrt_e", w.selected_value,
             constants.one_minus_inv_sqrt_e * f_opt);

  if (options.cardinality) {
    const double mean = instance.total_cost() /
                        static_cast<double>(instance.size());
    const std::size_t card = std::min<std::size_t>(
        instance.size(),
        std::max<std::size_t>(1, static_cast<std::size_t>(b / mean)));
    const CardinalityRun cr = cardinality_lambda(oracle, card);
    sink.check("cardinality_lambda", cr.value / e1, cr.lambda);
  }
  return w;
}

inline std::string dump_instance(const ValueOracle& oracle,
                                 const Instance& instance) {
  std::ostringstream out;
  out.precision(17);
  out << "budget " << instance.budget() << "\ncosts";
  for (double c : instance.costs()) out << ' ' << c;
  out << "\n" << oracle.describe();
  return out.str();
}

// trace_inequalities() that throws InequalityViolation on the first
// inequality whose slack falls below -tolerance.
inline ProofWitness proof_trace_check(const ValueOracle& oracle,
                                      const Instance& instance,
                                      const Constants& constants,
                                      const TraceCheckOptions& options = {}) {
  ProofWitness w = trace_inequalities(oracle, instance, constants, options);
  for (const auto& c : w.checks)
    if (!c.skipped && c.slack < -options.tolerance)
      throw InequalityViolation(c.name, c.slack,
                                dump_instance(oracle, instance));
  return w;
}

}  // namespace submod
