// randkit/tests.hpp -- sequential coverage tests with exact level measures,
// integral-form tests, oracle functionals with declared use bounds, and the
// conversions between test forms and betting strategies.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/cauchy.hpp"
#include "randkit/martingale.hpp"
#include "randkit/stepfn.hpp"

namespace randkit {

// Level list U_1, U_2, ... with exact stored measures; levels are 1-based:
// levels()[i] is U_{i+1} and must satisfy mu(U_{i+1}) <= 2^-(i+1).
// Constructor canonicalizes nothing: levels are stored as given, measures
// must equal the exact canonical measure.
class SchnorrTest {
 public:
  SchnorrTest() = default;
  SchnorrTest(std::vector<OpenSetCode> levels, std::vector<Rational> measures);
  // Computes measures itself.
  explicit SchnorrTest(std::vector<OpenSetCode> levels);

  std::size_t level_count() const { return levels_.size(); }
  // 1-based access: level(n) is U_n, 1 <= n <= level_count().
  const OpenSetCode& level(std::size_t n) const;
  const Rational& level_measure(std::size_t n) const;
  const std::vector<OpenSetCode>& levels() const { return levels_; }
  const std::vector<Rational>& measures() const { return measures_; }

  // Number of levels whose canonical form covers the word.
  std::size_t membership_count(const BitString& word) const;

 private:
  std::vector<OpenSetCode> levels_;
  std::vector<Rational> measures_;
};

// Integral-form test: a layered function with exactly known integral.
struct IntegralTest {
  LayeredFunction body;
};

// Total oracle functional with a declared use bound (truth-table modulus):
// the program sees exactly use(query) oracle bits, never more.
template <typename Token>
class OracleFunctional {
 public:
  using Program = std::function<Token(const BitString& prefix, std::size_t query)>;
  using UseBound = std::function<std::size_t(std::size_t)>;

  OracleFunctional(Program program, UseBound use, std::string description)
      : program_(std::move(program)),
        use_(std::move(use)),
        description_(std::move(description)) {}

  std::size_t use(std::size_t query) const { return use_(query); }
  const std::string& description() const { return description_; }

  Token apply(const BitSource& oracle, std::size_t query) const {
    return program_(oracle.prefix(use_(query)), query);
  }
  // PrefixTooShort if the prefix is shorter than the use bound.
  Token apply_prefix(const BitString& oracle_prefix, std::size_t query) const {
    return program_(oracle_prefix.prefix(use_(query)), query);
  }

 private:
  Program program_;
  UseBound use_;
  std::string description_;
};

// t = sum of indicators of the canonicalized levels; the recorded integral is
// the exact sum of level measures, and grid values count memberships.
IntegralTest schnorr_to_integral(const SchnorrTest& t);

// Delegates to the layering pipeline (see randkit/layering.hpp): builds the
// partial-sum plan for the body and emits its exceedance test.
SchnorrTest integral_to_schnorr(const IntegralTest& t, std::size_t horizon);

// U_n = union of minimal nodes s (within depth) with d(s) > 2^n, breadth
// first, for n = 1..levels; mu(U_n) <= d(root) * 2^-n exactly.
// Requires d valid with d(root) <= 1 so the result is a Schnorr test.
SchnorrTest martingale_to_test(const Martingale& d, std::size_t levels);

// d = sum over levels of the unnormalized conditional strategies d_n(s) =
// mu(U_n n [s]) / mu([s]); d(root) = sum of level measures <= 1.
Martingale test_to_martingale(const SchnorrTest& t);

// Enumeration-style uniform coverage test: per (oracle, level, index) one
// cylinder, with a declared use bound on the oracle.
class UniformSchnorrTest {
 public:
  UniformSchnorrTest(OracleFunctional<Cylinder> program, std::string rule)
      : program_(std::move(program)), rule_(std::move(rule)) {}

  Cylinder cylinder(const BitSource& oracle, std::size_t level,
                    std::size_t index) const {
    return program_.apply(oracle, cantor_pair(level, index));
  }
  const OracleFunctional<Cylinder>& program() const { return program_; }
  const std::string& rule() const { return rule_; }

 private:
  OracleFunctional<Cylinder> program_;
  std::string rule_;
};

// Replays the enumeration of level n under `oracle`, keeping a cylinder only
// when the canonical measure of everything kept stays <= 2^-n; reads exactly
// `budget` cylinders. Equals the original enumeration whenever the original
// obeys the bound.
OpenSetCode clamp_ml_enumeration(const UniformSchnorrTest& family,
                                 std::size_t n, const BitSource& oracle,
                                 std::size_t budget);

// Stage-semantics totalization: the partial map yields, per query, a value
// once its stage is reached (monotone in the stage by contract). The result
// at paired query <q, s> is partial(q, s) when converged, the empty set
// otherwise; it consumes no oracle bits.
using PartialEnumeration =
    std::function<std::optional<Cylinder>(std::size_t query, std::size_t stage)>;
OracleFunctional<Cylinder> totalize_code(const PartialEnumeration& partial);

// Oracle-indexed strategy tables decoded from per-node fast-Cauchy streams.
// Query pairing: <node_index, stream_index> with breadth-first node indices.
struct UniformMartingalePipeline {
  OracleFunctional<Rational> streams;
  OracleFunctional<std::size_t> order;
  unsigned depth = 0;
  std::size_t precision_index = 16;  // working precision 2^-16 by default

  // Per oracle: repair every node stream, read it at the precision index,
  // then repair the assembled table into a valid martingale.
  Martingale table_for(const BitSource& oracle) const;
  NodeTable raw_table_for(const BitSource& oracle) const;  // post stream-repair
  OrderFunction order_for(const BitSource& oracle) const;  // pass-through
};

// Bundles the decode pipeline; the order family passes through unchanged.
UniformMartingalePipeline uniformize_tt_martingale(
    OracleFunctional<Rational> streams, OracleFunctional<std::size_t> order,
    unsigned depth, std::size_t precision_index = 16);

}  // namespace randkit
