// src/layering.cpp -- plan construction, verification, evaluation, and the
// product-space constructions.
#include "randkit/layering.hpp"

#include <algorithm>
#include <span>
#include <utility>

#include "randkit/errors.hpp"

namespace randkit {
namespace {

// R_j = integral of t minus the first j layers, j = 0..layer count.
std::vector<Rational> residual_integrals(const LayeredFunction& t) {
  std::vector<Rational> r;
  r.reserve(t.layers().size() + 1);
  r.push_back(t.declared_integral());
  for (const auto& g : t.layers()) {
    r.push_back(r.back() - integral(g));
  }
  return r;
}

StepFunction sum_of_first(const LayeredFunction& t, std::size_t count,
                          unsigned grid_depth) {
  StepFunction f = StepFunction::constant(Rational(0), grid_depth);
  for (std::size_t i = 0; i < count; ++i) {
    f = add(f, t.layers()[i]);
  }
  return f.refine(grid_depth);
}

// Canonical code of {g > c} from full-depth cells.
OpenSetCode strict_upper_set(const StepFunction& g, const Rational& c) {
  std::vector<Cylinder> cells;
  const std::uint64_t count = std::uint64_t{1} << g.depth();
  for (std::uint64_t i = 0; i < count; ++i) {
    if (g.cell_value(i) > c) {
      cells.emplace_back(BitString::from_cell_index(g.depth(), i));
    }
  }
  return canonicalize(OpenSetCode(std::move(cells)));
}

// h^m_n = min over {f_n} and {f_j + c_j : m < j < n}. cut_levels is 0-based
// storage of the 1-based c sequence.
StepFunction approximant_stage(const std::vector<StepFunction>& f,
                               const std::vector<Rational>& cut_levels,
                               std::size_t m, std::size_t n) {
  StepFunction h = f[n];
  for (std::size_t j = m + 1; j < n; ++j) {
    h = min_of(h, add_constant(f[j], cut_levels[j - 1]));
  }
  return h;
}

StepFunction approximant_at(const std::vector<StepFunction>& f,
                            const std::vector<Rational>& cut_levels,
                            std::size_t m, std::size_t horizon) {
  if (m == horizon) return f[horizon];
  std::vector<StepFunction> stages;
  stages.reserve(horizon - m);
  for (std::size_t n = m + 1; n <= horizon; ++n) {
    stages.push_back(approximant_stage(f, cut_levels, m, n));
  }
  return sup_of(std::span<const StepFunction>(stages));
}

std::pair<unsigned, unsigned> split_depths(unsigned depth) {
  // even positions first: ceil on the X side
  return {(depth + 1) / 2, depth / 2};
}

}  // namespace

const Rational& LayeringPlan::cut_level(std::size_t n) const {
  if (n == 0 || n > cut_levels.size()) {
    throw InvariantError("cut level index is 1-based and bounded by horizon");
  }
  return cut_levels[n - 1];
}

const OpenSetCode& LayeringPlan::exceedance(std::size_t n) const {
  if (n == 0 || n > exceedance_sets.size()) {
    throw InvariantError("exceedance index is 1-based and bounded by horizon");
  }
  return exceedance_sets[n - 1];
}

const Rational& LayeringPlan::exceedance_measure(std::size_t n) const {
  if (n == 0 || n > exceedance_measures.size()) {
    throw InvariantError("exceedance index is 1-based and bounded by horizon");
  }
  return exceedance_measures[n - 1];
}

std::vector<std::size_t> choose_partial_sums(const LayeredFunction& t,
                                             std::size_t horizon) {
  const std::vector<Rational> residual = residual_integrals(t);
  std::vector<std::size_t> indices;
  indices.reserve(horizon + 1);
  std::size_t k = 0;
  for (std::size_t n = 0; n <= horizon; ++n) {
    const Rational bound = Rational::pow2(-2 * static_cast<long>(n));
    // residuals are nonincreasing, so k never moves backward
    while (residual[k] >= bound) ++k;
    indices.push_back(k);
  }
  return indices;
}

Rational choose_cut_level(const StepFunction& residual, std::size_t n) {
  if (n == 0) {
    throw InvariantError("cut levels start at n = 1");
  }
  const AtomicDistribution atoms = distribution(residual);
  // denominator 2^k candidates: odd j with 2^(k-n) < j < 2^(k-n+1)
  for (unsigned long k = static_cast<unsigned long>(n) + 1;; ++k) {
    const unsigned long shift = k - n;
    const std::uint64_t lo = std::uint64_t{1} << shift;
    for (std::uint64_t j = lo + 1; j < 2 * lo; j += 2) {
      const Rational candidate =
          Rational::dyadic(static_cast<long>(j), k);
      if (atoms.mass.find(candidate) == atoms.mass.end()) {
        return candidate;
      }
    }
  }
}

std::size_t saturation_horizon(const LayeredFunction& t) {
  const std::vector<Rational> residual = residual_integrals(t);
  Rational least_positive;
  bool found = false;
  for (const auto& r : residual) {
    if (r.sign() > 0 && (!found || r < least_positive)) {
      least_positive = r;
      found = true;
    }
  }
  if (!found) return 0;
  std::size_t n = 0;
  while (Rational::pow2(-2 * static_cast<long>(n)) > least_positive) ++n;
  return n;
}

LayeringPlan build_layering(const LayeredFunction& t, std::size_t horizon) {
  LayeringPlan plan;
  plan.source = t;
  plan.horizon = horizon;
  plan.grid_depth = t.depth();
  const StepFunction total = t.flatten();

  plan.partial_sum_indices = choose_partial_sums(t, horizon);
  plan.partial_sums.reserve(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) {
    plan.partial_sums.push_back(
        sum_of_first(t, plan.partial_sum_indices[n], plan.grid_depth));
  }

  for (std::size_t n = 0; n <= horizon; ++n) {
    if (plan.partial_sums[n].values() == total.values()) {
      plan.saturation_index = n;
      break;
    }
  }
  plan.saturated = plan.saturation_index.has_value();

  for (std::size_t n = 1; n <= horizon; ++n) {
    const StepFunction residual = sub_dominated(total, plan.partial_sums[n]);
    const Rational c = choose_cut_level(residual, n);
    OpenSetCode v = strict_upper_set(residual, c);
    plan.exceedance_measures.push_back(measure(v));
    plan.exceedance_sets.push_back(std::move(v));
    plan.cut_levels.push_back(c);
  }

  // U_m accumulates V_n for n > m, walked from the empty U_horizon down
  plan.u_sets.assign(horizon + 1, OpenSetCode());
  plan.u_measures.assign(horizon + 1, Rational(0));
  std::vector<Cylinder> acc;
  for (std::size_t m = horizon + 1; m-- > 0;) {
    if (m < horizon) {
      const OpenSetCode& v = plan.exceedance_sets[m];  // V_{m+1}
      acc.insert(acc.end(), v.cylinders().begin(), v.cylinders().end());
    }
    OpenSetCode u = canonicalize(OpenSetCode(acc));
    plan.u_measures[m] = measure(u);
    plan.u_sets[m] = std::move(u);
  }

  plan.approximants.reserve(horizon + 1);
  for (std::size_t m = 0; m <= horizon; ++m) {
    plan.approximants.push_back(
        approximant_at(plan.partial_sums, plan.cut_levels, m, horizon));
  }

  if (horizon > 0) {
    std::vector<OpenSetCode> levels(plan.u_sets.begin() + 1,
                                    plan.u_sets.end());
    std::vector<Rational> level_measures(plan.u_measures.begin() + 1,
                                         plan.u_measures.end());
    plan.emitted_test =
        SchnorrTest(std::move(levels), std::move(level_measures));
  }
  return plan;
}

PlanCheck verify_plan(const LayeringPlan& plan) {
  PlanCheck out;
  auto record = [&out](std::string name, bool ok, std::string detail) {
    out.records.push_back({std::move(name), ok, std::move(detail)});
  };

  const std::size_t h = plan.horizon;
  const bool shape_ok =
      plan.partial_sum_indices.size() == h + 1 &&
      plan.partial_sums.size() == h + 1 && plan.cut_levels.size() == h &&
      plan.exceedance_sets.size() == h && plan.exceedance_measures.size() == h &&
      plan.u_sets.size() == h + 1 && plan.u_measures.size() == h + 1 &&
      plan.approximants.size() == h + 1 &&
      plan.grid_depth == plan.source.depth();
  record("shape", shape_ok,
         shape_ok ? "list lengths and grid depth consistent"
                  : "list lengths or grid depth inconsistent with horizon");
  if (!shape_ok) {
    out.pass = false;
    return out;
  }

  const StepFunction total = plan.source.flatten();
  const std::vector<Rational> residual = residual_integrals(plan.source);
  const std::size_t layer_count = plan.source.layers().size();

  {
    bool ok = true;
    std::string detail = "k_n least with residual under 2^-2n; f_n matches";
    for (std::size_t n = 0; n <= h && ok; ++n) {
      const std::size_t k = plan.partial_sum_indices[n];
      const Rational bound = Rational::pow2(-2 * static_cast<long>(n));
      if (k > layer_count || residual[k] >= bound ||
          (k > 0 && residual[k - 1] < bound) ||
          (n > 0 && k < plan.partial_sum_indices[n - 1])) {
        ok = false;
        detail = "index defect at n = " + std::to_string(n);
        break;
      }
      const StepFunction f =
          sum_of_first(plan.source, k, plan.grid_depth);
      if (f.values() != plan.partial_sums[n].values()) {
        ok = false;
        detail = "stored f_" + std::to_string(n) + " differs from layer sum";
      }
    }
    record("partial-sums", ok, std::move(detail));
  }

  std::vector<StepFunction> residual_fns;
  residual_fns.reserve(h + 1);
  for (std::size_t n = 0; n <= h; ++n) {
    residual_fns.push_back(sub_dominated(total, plan.partial_sums[n]));
  }

  {
    bool ok = true;
    std::string detail = "2^-n < c_n < 2^-(n-1), non-atom, canonical choice";
    for (std::size_t n = 1; n <= h && ok; ++n) {
      const Rational& c = plan.cut_levels[n - 1];
      const Rational lo = Rational::pow2(-static_cast<long>(n));
      const Rational hi = Rational::pow2(-(static_cast<long>(n) - 1));
      const AtomicDistribution atoms = distribution(residual_fns[n]);
      if (!(lo < c && c < hi) || atoms.mass.find(c) != atoms.mass.end() ||
          c != choose_cut_level(residual_fns[n], n)) {
        ok = false;
        detail = "cut level defect at n = " + std::to_string(n);
      }
    }
    record("cut-levels", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "V_n = {t - f_n > c_n} with stored exact measure";
    for (std::size_t n = 1; n <= h && ok; ++n) {
      const OpenSetCode expect =
          strict_upper_set(residual_fns[n], plan.cut_levels[n - 1]);
      const OpenSetCode stored = canonicalize(plan.exceedance_sets[n - 1]);
      if (!same_canonical(stored, expect) ||
          measure(stored) != plan.exceedance_measures[n - 1]) {
        ok = false;
        detail = "exceedance defect at n = " + std::to_string(n);
      }
    }
    record("exceedance-sets", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "mu(V_n) <= 2^-2n / c_n <= 2^-n";
    for (std::size_t n = 1; n <= h && ok; ++n) {
      const Rational cap =
          Rational::pow2(-2 * static_cast<long>(n)) / plan.cut_levels[n - 1];
      if (plan.exceedance_measures[n - 1] > cap ||
          cap > Rational::pow2(-static_cast<long>(n))) {
        ok = false;
        detail = "exceedance bound fails at n = " + std::to_string(n);
      }
    }
    record("exceedance-bounds", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "U_m = union of V_n for n > m, stored exact measure";
    for (std::size_t m = 0; m <= h && ok; ++m) {
      std::vector<Cylinder> acc;
      for (std::size_t n = m + 1; n <= h; ++n) {
        const OpenSetCode v = canonicalize(plan.exceedance_sets[n - 1]);
        acc.insert(acc.end(), v.cylinders().begin(), v.cylinders().end());
      }
      const OpenSetCode expect = canonicalize(OpenSetCode(std::move(acc)));
      const OpenSetCode stored = canonicalize(plan.u_sets[m]);
      if (!same_canonical(stored, expect) ||
          measure(stored) != plan.u_measures[m]) {
        ok = false;
        detail = "u-set defect at m = " + std::to_string(m);
      }
    }
    record("u-sets", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "mu(U_m) <= 2^-m";
    for (std::size_t m = 0; m <= h && ok; ++m) {
      if (plan.u_measures[m] > Rational::pow2(-static_cast<long>(m))) {
        ok = false;
        detail = "u measure bound fails at m = " + std::to_string(m);
      }
    }
    record("u-bounds", ok, std::move(detail));
  }

  {
    std::optional<std::size_t> expect;
    for (std::size_t n = 0; n <= h; ++n) {
      if (plan.partial_sums[n].values() == total.values()) {
        expect = n;
        break;
      }
    }
    const bool ok = plan.saturation_index == expect &&
                    plan.saturated == expect.has_value();
    record("saturation", ok,
           ok ? (plan.saturated ? "saturated at n = " +
                                      std::to_string(*plan.saturation_index)
                                : "correctly flagged non-saturated")
              : "stored saturation data wrong");
  }

  {
    bool ok = true;
    std::string detail = "h_m matches the stage construction";
    for (std::size_t m = 0; m <= h && ok; ++m) {
      const StepFunction expect =
          approximant_at(plan.partial_sums, plan.cut_levels, m, h);
      if (expect.refine(plan.grid_depth).values() !=
          plan.approximants[m].refine(plan.grid_depth).values()) {
        ok = false;
        detail = "approximant defect at m = " + std::to_string(m);
      }
    }
    record("approximants", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "h_m <= t cell-by-cell";
    for (std::size_t m = 0; m <= h && ok; ++m) {
      if (!dominates(total, plan.approximants[m])) {
        ok = false;
        detail = "approximant exceeds t at m = " + std::to_string(m);
      }
    }
    record("approximant-domination", ok, std::move(detail));
  }

  if (plan.saturated) {
    bool ok = true;
    std::string detail = "{t > h_m} = U_m cell-for-cell";
    for (std::size_t m = 0; m <= h && ok; ++m) {
      const StepFunction hm = plan.approximants[m].refine(plan.grid_depth);
      std::vector<Cylinder> cells;
      const std::uint64_t count = std::uint64_t{1} << plan.grid_depth;
      for (std::uint64_t i = 0; i < count; ++i) {
        if (total.cell_value(i) > hm.cell_value(i)) {
          cells.emplace_back(BitString::from_cell_index(plan.grid_depth, i));
        }
      }
      const OpenSetCode exceed = canonicalize(OpenSetCode(std::move(cells)));
      if (!same_canonical(exceed, canonicalize(plan.u_sets[m]))) {
        ok = false;
        detail = "set identity fails at m = " + std::to_string(m);
      }
    }
    record("set-identity", ok, std::move(detail));
  }

  {
    bool ok = true;
    std::string detail = "|h_m - h^m_n| <= c_n for every m < n";
    for (std::size_t m = 0; m < h && ok; ++m) {
      for (std::size_t n = m + 1; n <= h && ok; ++n) {
        const StepFunction stage =
            approximant_stage(plan.partial_sums, plan.cut_levels, m, n);
        const StepFunction gap = abs_diff(plan.approximants[m], stage);
        if (!dominates(StepFunction::constant(plan.cut_levels[n - 1],
                                              gap.depth()),
                       gap)) {
          ok = false;
          detail = "stage gap exceeds c_n at m = " + std::to_string(m) +
                   ", n = " + std::to_string(n);
        }
      }
    }
    record("approximant-cauchy", ok, std::move(detail));
  }

  {
    bool ok = plan.emitted_test.level_count() == h;
    std::string detail = "emitted levels are U_1..U_horizon";
    for (std::size_t n = 1; n <= h && ok; ++n) {
      if (!same_canonical(canonicalize(plan.emitted_test.level(n)),
                          canonicalize(plan.u_sets[n])) ||
          plan.emitted_test.level_measure(n) != plan.u_measures[n]) {
        ok = false;
        detail = "emitted level differs at n = " + std::to_string(n);
      }
    }
    record("emitted-test", ok, std::move(detail));
  }

  out.pass = std::all_of(out.records.begin(), out.records.end(),
                         [](const PlanCheckRecord& r) { return r.ok; });
  return out;
}

EvalResult evaluate(const LayeringPlan& plan, const BitSource& X,
                    std::size_t budget) {
  if (!plan.saturated) {
    throw HorizonTooSmall("plan never saturates; rebuild with a larger horizon");
  }
  const BitString prefix = X.prefix(plan.grid_depth);
  const std::size_t last = std::min(budget, plan.horizon);
  for (std::size_t m = 0; m <= last; ++m) {
    if (!covers_word(plan.u_sets[m], prefix)) {
      return EvalResult{evaluate(plan.approximants[m], prefix), m};
    }
  }
  throw BudgetExceeded("point lies in every inspected level up to " +
                       std::to_string(last));
}

EvalResult evaluate(const LayeredFunction& t, const BitSource& X,
                    std::size_t budget) {
  const std::size_t horizon = std::max(budget, saturation_horizon(t));
  return evaluate(build_layering(t, horizon), X, budget);
}

LayeredFunction section(const LayeredFunction& t, const BitString& x_prefix) {
  const unsigned d = t.depth();
  const auto [dx, dy] = split_depths(d);
  if (x_prefix.size() < dx) {
    throw PrefixTooShort("section needs " + std::to_string(dx) +
                         " oracle bits, got " + std::to_string(x_prefix.size()));
  }
  const BitString xw = x_prefix.prefix(dx);
  std::vector<StepFunction> layers;
  layers.reserve(t.layers().size());
  for (const auto& g : t.layers()) {
    const StepFunction fine = g.refine(d);
    std::vector<Rational> values;
    values.reserve(std::size_t{1} << dy);
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << dy); ++w) {
      values.push_back(evaluate(
          fine, interleave_word(xw, BitString::from_cell_index(dy, w))));
    }
    layers.emplace_back(dy, std::move(values));
  }
  return LayeredFunction(std::move(layers));
}

LayeredFunction marginal(const LayeredFunction& t) {
  const unsigned d = t.depth();
  const auto [dx, dy] = split_depths(d);
  const Rational cell = Rational::pow2(-static_cast<long>(dy));
  std::vector<StepFunction> layers;
  layers.reserve(t.layers().size());
  for (const auto& g : t.layers()) {
    const StepFunction fine = g.refine(d);
    std::vector<Rational> values;
    values.reserve(std::size_t{1} << dx);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << dx); ++v) {
      const BitString xw = BitString::from_cell_index(dx, v);
      Rational sum;
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << dy); ++w) {
        sum = sum +
              evaluate(fine, interleave_word(xw, BitString::from_cell_index(dy, w)));
      }
      values.push_back(sum * cell);
    }
    layers.emplace_back(dx, std::move(values));
  }
  return LayeredFunction(std::move(layers));
}

LayeredFunction rescale_to_budget(const LayeredFunction& tX, const Rational& h) {
  if (h.sign() < 0 || h > tX.declared_integral()) {
    throw BudgetOutOfRange("budget must lie in [0, " +
                           tX.declared_integral().str() + "], got " + h.str());
  }
  std::vector<StepFunction> layers;
  layers.reserve(tX.layers().size());
  Rational below;  // cumulative integral of the layers already emitted
  for (const auto& g : tX.layers()) {
    const Rational next = below + integral(g);
    if (h >= next) {
      layers.push_back(g);
    } else if (h <= below) {
      layers.push_back(StepFunction::constant(Rational(0), g.depth()));
    } else {
      layers.push_back(scale(g, (h - below) / (next - below)));
    }
    below = next;
  }
  return LayeredFunction(std::move(layers));
}

std::size_t UniformIntegralFamily::level_at(const BitSource& oracle) const {
  return evaluate(plan, oracle, plan.horizon).level;
}

Rational UniformIntegralFamily::budget_at(const BitSource& oracle) const {
  // always the plan's approximant value, even where it agrees with u
  return evaluate(plan, oracle, plan.horizon).value;
}

LayeredFunction UniformIntegralFamily::family_at(const BitSource& oracle) const {
  const BitString xw = oracle.prefix(use_bound);
  return rescale_to_budget(section(base, xw), budget_at(oracle));
}

UniformIntegralFamily assemble_uniform_family(const LayeredFunction& t,
                                              std::size_t horizon) {
  UniformIntegralFamily family;
  family.base = t;
  family.margin = marginal(t);
  family.plan = build_layering(family.margin, horizon);
  family.use_bound = split_depths(t.depth()).first;
  return family;
}

}  // namespace randkit
