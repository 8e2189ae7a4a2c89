// randkit/stepfn.hpp -- nonnegative step functions on depth-d cell grids,
// layered sums, exact distributions, tail bounds, and the approximation
// sandwich used to compare a target with a near neighbour.
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/rational.hpp"

namespace randkit {

// Constant on each depth-d cell; values indexed by lexicographic cell word.
// Public constructors reject negative values: signed data only ever appears
// inside difference computations and never escapes as a StepFunction.
class StepFunction {
 public:
  StepFunction() : depth_(0), values_{Rational(0)} {}
  StepFunction(unsigned depth, std::vector<Rational> values);
  static StepFunction constant(const Rational& value, unsigned depth = 0);
  static StepFunction indicator(const OpenSetCode& canonical);

  unsigned depth() const { return depth_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& cell_value(std::uint64_t cell) const { return values_[cell]; }

  // Same function on a finer grid (to_depth >= depth), values repeated.
  StepFunction refine(unsigned to_depth) const;

 private:
  unsigned depth_;
  std::vector<Rational> values_;
};

// Value on the cell containing `prefix`; PrefixTooShort if |prefix| < depth.
Rational evaluate(const StepFunction& f, const BitString& prefix);
Rational integral(const StepFunction& f);  // 2^-d * sum of values

// Binary combiners align operands on the common refinement (max depth) and
// do not re-compress the result.
StepFunction add(const StepFunction& f, const StepFunction& g);
StepFunction min_of(const StepFunction& f, const StepFunction& g);
StepFunction sup_of(std::span<const StepFunction> family);  // nonempty
StepFunction scale(const StepFunction& f, const Rational& c);          // c >= 0
StepFunction add_constant(const StepFunction& f, const Rational& c);   // c >= 0
// f - g where g <= f cellwise; InvariantError otherwise.
StepFunction sub_dominated(const StepFunction& f, const StepFunction& g);
StepFunction abs_diff(const StepFunction& f, const StepFunction& g);   // |f-g|
StepFunction abs_shift(const StepFunction& f, const Rational& a);      // |f-a|
Rational l1_distance(const StepFunction& f, const StepFunction& g);
bool dominates(const StepFunction& upper, const StepFunction& lower);

// Exact value -> mass table; masses are positive and sum to 1.
struct AtomicDistribution {
  std::map<Rational, Rational> mass;
  bool is_atom(const Rational& value) const { return mass.count(value) > 0; }
};

AtomicDistribution distribution(const StepFunction& f);

// mu{f > c} (strict) or mu{f >= c}.
Rational tail_measure(const StepFunction& f, const Rational& c, bool strict);

// mu{f >= c} <= integral(f)/c, exactly; requires c > 0.
bool check_chebyshev(const StepFunction& f, const Rational& c);

// Finite stack of nonnegative step layers; the recorded integral always
// equals the sum of layer integrals exactly.
class LayeredFunction {
 public:
  LayeredFunction() = default;
  explicit LayeredFunction(std::vector<StepFunction> layers);

  const std::vector<StepFunction>& layers() const { return layers_; }
  const Rational& declared_integral() const { return declared_integral_; }
  unsigned depth() const;        // max layer depth, 0 when empty
  StepFunction flatten() const;  // sum of layers at the common depth

 private:
  std::vector<StepFunction> layers_;
  Rational declared_integral_ = Rational(0);
};

// All five exact quantities of the sandwich comparison plus verdicts.
// Precondition: ||t - g||_1 <= eps * delta (PreconditionViolated otherwise),
// eps > 0, r > 0, delta >= 0.
struct LusinReport {
  Rational l1_distance;        // ||t - g||_1
  Rational mu_concentration;   // mu(|t - g| >= eps)
  Rational mu_t_within;        // mu(|t - a| < r)
  Rational mu_g_within;        // mu(|g - a| < r - eps)
  Rational mu_t_within_inner;  // mu(|t - a| < r - 2 eps)
  bool chebyshev_ok = false;   // mu_concentration <= delta
  bool lower_ok = false;       // mu_t_within >= mu_g_within - delta
  bool inner_ok = false;       // mu_g_within >= mu_t_within_inner - delta
  bool pass = false;
};

LusinReport lusin_sandwich(const LayeredFunction& t, const StepFunction& g,
                           const Rational& a, const Rational& r,
                           const Rational& eps, const Rational& delta);

}  // namespace randkit
