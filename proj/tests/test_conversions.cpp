// tests/test_conversions.cpp -- moving between coverage tests, integral
// tests, and betting strategies; enumeration clamping; totalization; the
// oracle-indexed strategy pipeline.
#include <doctest.h>

#include <optional>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/errors.hpp"
#include "randkit/layering.hpp"
#include "randkit/martingale.hpp"
#include "randkit/rational.hpp"
#include "randkit/serialize.hpp"
#include "randkit/stepfn.hpp"
#include "randkit/tests.hpp"

using namespace randkit;

namespace {

BitString word(const char* s) { return BitString::from_string(s); }

OpenSetCode code_of(std::initializer_list<const char*> stems) {
  std::vector<Cylinder> cs;
  for (const char* s : stems) cs.emplace_back(BitString::from_string(s));
  return OpenSetCode(std::move(cs));
}

// U_n = [1^n] for n = 1..3
SchnorrTest nested_ones() {
  return SchnorrTest({code_of({"1"}), code_of({"11"}), code_of({"111"})});
}

}  // namespace

TEST_SUITE("conversions") {

TEST_CASE("level lists enforce their measure bounds on construction") {
  const SchnorrTest t = nested_ones();
  CHECK(t.level_count() == 3);
  CHECK(t.level_measure(1) == Rational(1, 2));
  CHECK(t.level_measure(3) == Rational(1, 8));
  CHECK_THROWS_AS(t.level(0), InvariantError);
  CHECK_THROWS_AS(t.level(4), InvariantError);

  // [0] has measure 1/2 > 2^-2: illegal as a second level
  CHECK_THROWS_AS(SchnorrTest({code_of({"1"}), code_of({"0"})}),
                  InvariantError);
  // stored measure must match the canonical one
  CHECK_THROWS_AS(SchnorrTest({code_of({"1"})}, {Rational(1, 4)}),
                  InvariantError);
}

TEST_CASE("membership counts read canonical covers") {
  const SchnorrTest t = nested_ones();
  CHECK(t.membership_count(word("111")) == 3);
  CHECK(t.membership_count(word("110")) == 2);
  CHECK(t.membership_count(word("10")) == 1);
  CHECK(t.membership_count(word("0")) == 0);
}

TEST_CASE("coverage tests become layered counting functions") {
  const IntegralTest it = schnorr_to_integral(nested_ones());
  CHECK(it.body.layers().size() == 3);
  CHECK(it.body.depth() == 3);
  CHECK(it.body.declared_integral() == Rational(7, 8));
  const StepFunction flat = it.body.flatten();
  for (std::uint64_t i = 0; i < 8; ++i) {
    const BitString x = BitString::from_cell_index(3, i);
    CHECK(flat.cell_value(i) ==
          Rational(static_cast<long>(nested_ones().membership_count(x))));
  }
}

TEST_CASE("integral tests emit their exceedance coverage test") {
  const IntegralTest it = schnorr_to_integral(nested_ones());
  const SchnorrTest back =
      integral_to_schnorr(it, saturation_horizon(it.body));
  // the nested stack is captured exactly by its approximants, so every
  // emitted level is empty
  CHECK(back.level_count() == 2);
  CHECK(back.level_measure(1) == Rational(0));
  CHECK(back.level_measure(2) == Rational(0));
  CHECK_FALSE(covers_word(canonicalize(back.level(1)), word("111")));

  CHECK(integral_to_schnorr(it, 0).level_count() == 0);
}

TEST_CASE("capital exceedance sets form a coverage test") {
  // doubles along 1s: d(1^k) = 2^k, zero elsewhere
  std::vector<Rational> nodes;
  for (unsigned level = 0; level <= 4; ++level) {
    for (std::size_t i = 0; i < (std::size_t{1} << level); ++i) {
      const bool all_ones = i + 1 == (std::size_t{1} << level);
      nodes.push_back(all_ones ? Rational::pow2(level) : Rational(0));
    }
  }
  const Martingale d(4, std::move(nodes));
  REQUIRE(validate(d));

  const SchnorrTest t = martingale_to_test(d, 3);
  CHECK(t.level_count() == 3);
  CHECK(canonicalize(t.level(1)).cylinders() ==
        std::vector<Cylinder>{Cylinder(word("11"))});
  CHECK(canonicalize(t.level(2)).cylinders() ==
        std::vector<Cylinder>{Cylinder(word("111"))});
  CHECK(canonicalize(t.level(3)).cylinders() ==
        std::vector<Cylinder>{Cylinder(word("1111"))});
  CHECK(t.level_measure(1) == Rational(1, 4));
  CHECK(t.level_measure(3) == Rational(1, 16));
}

TEST_CASE("capital exceedance requires a bounded valid strategy") {
  const Martingale rich(1, {Rational(2), Rational(2), Rational(2)});
  CHECK_THROWS_AS(martingale_to_test(rich, 2), InvariantError);
  const Martingale unfair(1, {Rational(1), Rational(2), Rational(1)});
  CHECK_THROWS_AS(martingale_to_test(unfair, 2), InvariantError);
}

TEST_CASE("coverage tests become conditional betting strategies") {
  const SchnorrTest single = SchnorrTest({code_of({"0"})});
  const Martingale d = test_to_martingale(single);
  CHECK(d.root() == Rational(1, 2));
  CHECK(d.at(word("0")) == Rational(1));
  CHECK(d.at(word("1")) == Rational(0));
  CHECK(validate(d));

  const Martingale stacked = test_to_martingale(nested_ones());
  CHECK(stacked.root() == Rational(7, 8));
  CHECK(stacked.at(word("1")) == Rational(7, 4));
  CHECK(stacked.at(word("11")) == Rational(5, 2));
  CHECK(stacked.at(word("111")) == Rational(3));
  CHECK(stacked.at(word("0")) == Rational(0));
  CHECK(validate(stacked));
}

TEST_CASE("clamping keeps an enumeration under its level bound") {
  UniformTestSpec spec;
  spec.rule = "constant";
  spec.use = {0};
  spec.levels = {{Cylinder(word("0")), Cylinder(word("10"))}};
  const UniformSchnorrTest family = spec.build();

  const BitSource oracle = BitSource::prng(3);
  const OpenSetCode kept = clamp_ml_enumeration(family, 1, oracle, 2);
  CHECK(kept.cylinders() == std::vector<Cylinder>{Cylinder(word("0"))});
  // indices past the list enumerate the empty set and change nothing
  const OpenSetCode kept2 = clamp_ml_enumeration(family, 1, oracle, 6);
  CHECK(kept2.cylinders() == std::vector<Cylinder>{Cylinder(word("0"))});
  // an obedient enumeration passes through intact
  spec.levels = {{Cylinder(word("00")), Cylinder(word("01"))}};
  const OpenSetCode obeyed =
      clamp_ml_enumeration(spec.build(), 1, oracle, 2);
  CHECK(obeyed.cylinders() == std::vector<Cylinder>{Cylinder(word("0"))});
}

TEST_CASE("gated enumerations read the declared oracle bits") {
  UniformTestSpec spec;
  spec.rule = "gate-on-first-bit";
  spec.use = {1};
  spec.levels = {{Cylinder(word("00"))}};
  spec.levels_alt = {{Cylinder(word("11"))}};
  const UniformSchnorrTest family = spec.build();
  CHECK(family.cylinder(BitSource::from_word(word("0")), 1, 0) ==
        Cylinder(word("00")));
  CHECK(family.cylinder(BitSource::from_word(word("1")), 1, 0) ==
        Cylinder(word("11")));
  CHECK(family.program().use(5) == 1);
}

TEST_CASE("totalization patches divergent stages with the empty set") {
  const PartialEnumeration partial =
      [](std::size_t q, std::size_t stage) -> std::optional<Cylinder> {
    if (stage < q) return std::nullopt;  // not yet converged
    return Cylinder(BitString::from_cell_index(2, q % 4));
  };
  const OracleFunctional<Cylinder> total = totalize_code(partial);
  CHECK(total.use(12) == 0);
  CHECK(total.description() == "stage-patched totalization");
  const BitSource oracle = BitSource::prng(1);
  CHECK(total.apply(oracle, cantor_pair(2, 1)).is_empty_set());
  CHECK(total.apply(oracle, cantor_pair(2, 5)) ==
        Cylinder(BitString::from_cell_index(2, 2)));
}

TEST_CASE("strategy tables decode from per-node streams") {
  const OracleFunctional<Rational> streams(
      [](const BitString& prefix, std::size_t query) {
        const auto [node, i] = cantor_unpair(query);
        (void)i;
        if (node == 0) return Rational(1);
        const Rational lucky = prefix.bit(0) ? Rational(3, 2) : Rational(1, 2);
        return node == 1 ? lucky : Rational(2) - lucky;
      },
      [](std::size_t) { return std::size_t{1}; }, "gated ratio streams");
  const OracleFunctional<std::size_t> order(
      [](const BitString& prefix, std::size_t n) {
        return n + static_cast<std::size_t>(prefix.bit(0));
      },
      [](std::size_t) { return std::size_t{1}; }, "shifted identity");

  const UniformMartingalePipeline pipe =
      uniformize_tt_martingale(streams, order, 1);
  const Martingale lucky = pipe.table_for(BitSource::from_word(word("1")));
  CHECK(lucky.nodes() ==
        std::vector<Rational>{Rational(1), Rational(3, 2), Rational(1, 2)});
  const Martingale plain = pipe.table_for(BitSource::from_word(word("0")));
  CHECK(plain.nodes() ==
        std::vector<Rational>{Rational(1), Rational(1, 2), Rational(3, 2)});
  CHECK(validate(lucky));

  const OrderFunction f = pipe.order_for(BitSource::from_word(word("1")));
  CHECK(f.at(3) == 4);
  CHECK(f.spec() == "uniform-order(word:1)");
}

TEST_CASE("stream decoding repairs hostile streams") {
  const OracleFunctional<Rational> streams(
      [](const BitString&, std::size_t query) {
        const auto [node, i] = cantor_unpair(query);
        if (node == 0) return Rational(1);
        if (node == 1) return Rational(-1);           // clamps to zero
        return i % 2 == 0 ? Rational(5) : Rational(0);  // freezes at 5
      },
      [](std::size_t) { return std::size_t{0}; }, "hostile streams");
  const OracleFunctional<std::size_t> order(
      [](const BitString&, std::size_t n) { return n; },
      [](std::size_t) { return std::size_t{0}; }, "identity");

  const UniformMartingalePipeline pipe =
      uniformize_tt_martingale(streams, order, 1);
  const NodeTable raw = pipe.raw_table_for(BitSource::prng(1));
  CHECK(raw.nodes ==
        std::vector<Rational>{Rational(1), Rational(0), Rational(5)});
  const Martingale fixed = pipe.table_for(BitSource::prng(1));
  CHECK(validate(fixed));
  CHECK(fixed.nodes() ==
        std::vector<Rational>{Rational(1), Rational(0), Rational(2)});
}

}  // TEST_SUITE
