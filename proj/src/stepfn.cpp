#include "randkit/stepfn.hpp"

#include <algorithm>
#include <utility>

#include "randkit/errors.hpp"

namespace randkit {

namespace {

std::size_t cells_at(unsigned depth) {
  if (depth > 30) throw InvariantError("grid depth out of desk-scale range");
  return std::size_t{1} << depth;
}

}  // namespace

StepFunction::StepFunction(unsigned depth, std::vector<Rational> values)
    : depth_(depth), values_(std::move(values)) {
  if (values_.size() != cells_at(depth)) {
    throw InvariantError("step function needs 2^depth values");
  }
  for (const auto& v : values_) {
    if (v.sign() < 0) throw InvariantError("step function value below zero");
  }
}

StepFunction StepFunction::constant(const Rational& value, unsigned depth) {
  return StepFunction(depth, std::vector<Rational>(cells_at(depth), value));
}

StepFunction StepFunction::indicator(const OpenSetCode& canonical) {
  const unsigned d = max_stem_depth(canonical);
  std::vector<Rational> values;
  values.reserve(cells_at(d));
  for (std::uint64_t cell = 0; cell < cells_at(d); ++cell) {
    values.push_back(
        covers_word(canonical, BitString::from_cell_index(d, cell))
            ? Rational(1)
            : Rational(0));
  }
  return StepFunction(d, std::move(values));
}

StepFunction StepFunction::refine(unsigned to_depth) const {
  if (to_depth < depth_) throw InvariantError("refine cannot coarsen");
  if (to_depth == depth_) return *this;
  const std::size_t block = std::size_t{1} << (to_depth - depth_);
  std::vector<Rational> values;
  values.reserve(cells_at(to_depth));
  for (const auto& v : values_) {
    for (std::size_t i = 0; i < block; ++i) values.push_back(v);
  }
  return StepFunction(to_depth, std::move(values));
}

Rational evaluate(const StepFunction& f, const BitString& prefix) {
  if (prefix.size() < f.depth()) {
    throw PrefixTooShort("prefix shorter than grid depth");
  }
  return f.cell_value(prefix.prefix(f.depth()).cell_index());
}

Rational integral(const StepFunction& f) {
  Rational total(0);
  for (const auto& v : f.values()) total += v;
  return total * Rational::pow2(-static_cast<long>(f.depth()));
}

namespace {

template <typename Op>
StepFunction zip(const StepFunction& f, const StepFunction& g, Op op) {
  const unsigned d = std::max(f.depth(), g.depth());
  const StepFunction a = f.refine(d);
  const StepFunction b = g.refine(d);
  std::vector<Rational> values;
  values.reserve(a.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    values.push_back(op(a.values()[i], b.values()[i]));
  }
  return StepFunction(d, std::move(values));
}

}  // namespace

StepFunction add(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, [](const Rational& x, const Rational& y) { return x + y; });
}

StepFunction min_of(const StepFunction& f, const StepFunction& g) {
  return zip(f, g,
             [](const Rational& x, const Rational& y) { return std::min(x, y); });
}

StepFunction sup_of(std::span<const StepFunction> family) {
  if (family.empty()) throw InvariantError("sup over an empty family");
  StepFunction acc = family[0];
  for (std::size_t i = 1; i < family.size(); ++i) {
    acc = zip(acc, family[i], [](const Rational& x, const Rational& y) {
      return std::max(x, y);
    });
  }
  return acc;
}

StepFunction scale(const StepFunction& f, const Rational& c) {
  if (c.sign() < 0) throw InvariantError("scale factor below zero");
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back(v * c);
  return StepFunction(f.depth(), std::move(values));
}

StepFunction add_constant(const StepFunction& f, const Rational& c) {
  if (c.sign() < 0) throw InvariantError("shift below zero");
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back(v + c);
  return StepFunction(f.depth(), std::move(values));
}

StepFunction sub_dominated(const StepFunction& f, const StepFunction& g) {
  return zip(f, g, [](const Rational& x, const Rational& y) {
    if (y > x) throw InvariantError("sub_dominated: subtrahend exceeds value");
    return x - y;
  });
}

StepFunction abs_diff(const StepFunction& f, const StepFunction& g) {
  return zip(f, g,
             [](const Rational& x, const Rational& y) { return (x - y).abs(); });
}

StepFunction abs_shift(const StepFunction& f, const Rational& a) {
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back((v - a).abs());
  return StepFunction(f.depth(), std::move(values));
}

Rational l1_distance(const StepFunction& f, const StepFunction& g) {
  return integral(abs_diff(f, g));
}

bool dominates(const StepFunction& upper, const StepFunction& lower) {
  const unsigned d = std::max(upper.depth(), lower.depth());
  const StepFunction a = upper.refine(d);
  const StepFunction b = lower.refine(d);
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (b.values()[i] > a.values()[i]) return false;
  }
  return true;
}

AtomicDistribution distribution(const StepFunction& f) {
  AtomicDistribution dist;
  const Rational cell_mass = Rational::pow2(-static_cast<long>(f.depth()));
  for (const auto& v : f.values()) dist.mass[v] += cell_mass;
  return dist;
}

Rational tail_measure(const StepFunction& f, const Rational& c, bool strict) {
  Rational total(0);
  const Rational cell_mass = Rational::pow2(-static_cast<long>(f.depth()));
  for (const auto& v : f.values()) {
    if (strict ? v > c : v >= c) total += cell_mass;
  }
  return total;
}

bool check_chebyshev(const StepFunction& f, const Rational& c) {
  if (c.sign() <= 0) throw InvariantError("chebyshev level must be positive");
  return tail_measure(f, c, /*strict=*/false) * c <= integral(f);
}

LayeredFunction::LayeredFunction(std::vector<StepFunction> layers)
    : layers_(std::move(layers)) {
  for (const auto& g : layers_) declared_integral_ += integral(g);
}

unsigned LayeredFunction::depth() const {
  unsigned d = 0;
  for (const auto& g : layers_) d = std::max(d, g.depth());
  return d;
}

StepFunction LayeredFunction::flatten() const {
  StepFunction sum = StepFunction::constant(Rational(0), depth());
  for (const auto& g : layers_) sum = add(sum, g);
  return sum;
}

namespace {

// mu(|f - a| < bound); zero outright when bound <= 0.
Rational mass_within(const StepFunction& f, const Rational& a,
                     const Rational& bound) {
  if (bound.sign() <= 0) return Rational(0);
  return Rational(1) - tail_measure(abs_shift(f, a), bound, /*strict=*/false);
}

}  // namespace

LusinReport lusin_sandwich(const LayeredFunction& t, const StepFunction& g,
                           const Rational& a, const Rational& r,
                           const Rational& eps, const Rational& delta) {
  if (eps.sign() <= 0) throw InvariantError("eps must be positive");
  if (r.sign() <= 0) throw InvariantError("r must be positive");
  if (delta.sign() < 0) throw InvariantError("delta must be nonnegative");
  const StepFunction flat = t.flatten();
  LusinReport rep;
  rep.l1_distance = l1_distance(flat, g);
  if (rep.l1_distance > eps * delta) {
    throw PreconditionViolated("||t - g||_1 exceeds eps * delta");
  }
  rep.mu_concentration = tail_measure(abs_diff(flat, g), eps, /*strict=*/false);
  rep.mu_t_within = mass_within(flat, a, r);
  rep.mu_g_within = mass_within(g, a, r - eps);
  rep.mu_t_within_inner = mass_within(flat, a, r - eps - eps);
  rep.chebyshev_ok = rep.mu_concentration <= delta;
  rep.lower_ok = rep.mu_t_within >= rep.mu_g_within - delta;
  rep.inner_ok = rep.mu_g_within >= rep.mu_t_within_inner - delta;
  rep.pass = rep.chebyshev_ok && rep.lower_ok && rep.inner_ok;
  return rep;
}

}  // namespace randkit
