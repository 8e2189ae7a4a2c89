// randkit/layering.hpp -- the partial-sum layering pipeline: cut-level
// selection, exceedance sets, lower approximants with an exact set identity,
// evaluation of integral tests, and the product-space section/marginal/
// rescale constructions built on top of it.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/stepfn.hpp"
#include "randkit/tests.hpp"

namespace randkit {

// Complete record of one layering run over a finite layered function t.
// Indexing conventions, fixed throughout:
//   partial_sum_indices / partial_sums     n = 0..horizon
//   cut_levels / exceedance_sets           n = 1..horizon (1-based accessors)
//   u_sets / approximants                  m = 0..horizon
// Invariants (verify_plan checks them all):
//   f_n = sum of the first k_n layers, integral(t - f_n) < 2^-2n
//   2^-n < c_n < 2^-(n-1), distribution(t - f_n) has no atom at c_n
//   V_n = {t - f_n > c_n}, U_m = union of V_n for n > m, mu(U_m) <= 2^-m
//   h_m <= t, and for saturated plans {t > h_m} = U_m cell-for-cell.
struct LayeringPlan {
  LayeredFunction source;
  std::size_t horizon = 0;
  unsigned grid_depth = 0;
  bool saturated = false;
  std::optional<std::size_t> saturation_index;  // least n with f_n = t

  std::vector<std::size_t> partial_sum_indices;
  std::vector<StepFunction> partial_sums;
  std::vector<Rational> cut_levels;
  std::vector<OpenSetCode> exceedance_sets;
  std::vector<Rational> exceedance_measures;
  std::vector<OpenSetCode> u_sets;
  std::vector<Rational> u_measures;
  std::vector<StepFunction> approximants;
  SchnorrTest emitted_test;  // levels U_1..U_horizon

  // 1-based accessors matching the n in the invariants.
  const Rational& cut_level(std::size_t n) const;
  const OpenSetCode& exceedance(std::size_t n) const;
  const Rational& exceedance_measure(std::size_t n) const;
};

// k_n = least layer count whose residual integral drops below 2^-2n, for
// n = 0..horizon; nondecreasing, and at most the layer count.
std::vector<std::size_t> choose_partial_sums(const LayeredFunction& t,
                                             std::size_t horizon);

// Smallest-denominator dyadic in the open interval (2^-n, 2^-(n-1)) that is
// not an atom of distribution(residual); equal-denominator ties broken toward
// the smaller value. Requires n >= 1. Always terminates: the residual has
// finitely many atoms and every denominator level past them offers a free
// candidate.
Rational choose_cut_level(const StepFunction& residual, std::size_t n);

// Least horizon at which the plan saturates: the smallest n such that the
// least residual below 2^-2n is exactly zero.
std::size_t saturation_horizon(const LayeredFunction& t);

// Assembles the full plan. Never throws on a short horizon: the plan comes
// back flagged non-saturated and evaluate refuses it instead.
LayeringPlan build_layering(const LayeredFunction& t, std::size_t horizon);

struct PlanCheckRecord {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PlanCheck {
  std::vector<PlanCheckRecord> records;
  bool pass = false;
};

// Re-derives every invariant from the plan's source, cell-by-cell on the
// grid. The set identity {t > h_m} = U_m is only asserted for saturated
// plans; everything else applies unconditionally.
PlanCheck verify_plan(const LayeringPlan& plan);

struct EvalResult {
  Rational value;
  std::size_t level = 0;  // the m whose approximant produced the value
};

// Least m <= min(budget, horizon) with X outside U_m (membership decided at
// the grid depth); returns h_m at X's prefix, which equals t(X) exactly by
// the set identity. HorizonTooSmall on non-saturated plans; BudgetExceeded
// when X lies in every inspected U_m.
EvalResult evaluate(const LayeringPlan& plan, const BitSource& X,
                    std::size_t budget);
// Convenience: builds a saturated plan first (horizon = max(budget,
// saturation_horizon)).
EvalResult evaluate(const LayeredFunction& t, const BitSource& X,
                    std::size_t budget);

// Product-space views. Words of length d interleave ceil(d/2) even-position
// bits (the X coordinate) with floor(d/2) odd-position bits (Y).
// t^X(Y) = t(X interleaved with Y), layer by layer; PrefixTooShort when the
// prefix has fewer than ceil(depth/2) bits.
LayeredFunction section(const LayeredFunction& t, const BitString& x_prefix);
// u(X) = integral of t^X dY, layer by layer; integral(u) = integral(t)
// exactly.
LayeredFunction marginal(const LayeredFunction& t);

// Truncates the layer stack to total integral h: keep layers while their
// cumulative integral stays under h, scale the straddling layer linearly,
// zero the rest. Requires 0 <= h <= declared integral (BudgetOutOfRange);
// the result has integral exactly h and equals tX when h is the full
// integral.
LayeredFunction rescale_to_budget(const LayeredFunction& tX, const Rational& h);

// Oracle-indexed family of budgeted sections: h(X) is read off the plan
// built on the marginal (always the approximant value, never the marginal
// itself), and the member at X is section(base, X) rescaled to h(X).
struct UniformIntegralFamily {
  LayeredFunction base;
  LayeredFunction margin;  // u = marginal(base)
  LayeringPlan plan;       // built on the margin
  std::size_t use_bound = 0;  // oracle bits consumed per member

  std::size_t level_at(const BitSource& oracle) const;
  Rational budget_at(const BitSource& oracle) const;
  LayeredFunction family_at(const BitSource& oracle) const;
};

UniformIntegralFamily assemble_uniform_family(const LayeredFunction& t,
                                              std::size_t horizon);

}  // namespace randkit
