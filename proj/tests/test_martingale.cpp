// tests/test_martingale.cpp -- betting strategies: fairness, multiplicative
// form, repair, interleaved splits, trajectories, and order monitoring.
#include <doctest.h>

#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/errors.hpp"
#include "randkit/martingale.hpp"
#include "randkit/rational.hpp"

using namespace randkit;

namespace {

BitString word(const char* s) { return BitString::from_string(s); }

// root 1; d(0) = 3/2, d(1) = 1/2; d(00) = 2, d(01) = 1, d(10) = 3/4,
// d(11) = 1/4. Fair and strictly positive.
Martingale depth2_fixture() {
  return Martingale(2, {Rational(1), Rational(3, 2), Rational(1, 2), Rational(2),
                        Rational(1), Rational(3, 4), Rational(1, 4)});
}

}  // namespace

TEST_SUITE("martingale") {

TEST_CASE("node tables index breadth first") {
  CHECK(NodeTable::node_count(0) == 1);
  CHECK(NodeTable::node_count(2) == 7);
  CHECK(NodeTable::index_of(BitString{}) == 0);
  CHECK(NodeTable::index_of(word("0")) == 1);
  CHECK(NodeTable::index_of(word("1")) == 2);
  CHECK(NodeTable::index_of(word("00")) == 3);
  CHECK(NodeTable::index_of(word("11")) == 6);
}

TEST_CASE("construction checks shape, validation checks fairness") {
  CHECK_THROWS_AS(Martingale(1, {Rational(1)}), InvariantError);
  const Martingale d = depth2_fixture();
  CHECK(validate(d));
  CHECK(unfair_nodes(d).empty());
  CHECK(negative_nodes(d).empty());
  CHECK(d.root() == Rational(1));
  CHECK(d.at(word("01")) == Rational(1));

  // shape-only construction lets invalid tables exist for reporting
  const Martingale bad(1, {Rational(1), Rational(2), Rational(1)});
  CHECK_FALSE(validate(bad));
  CHECK(unfair_nodes(bad) == std::vector<BitString>{BitString{}});
  const Martingale neg(1, {Rational(0), Rational(-1), Rational(1)});
  CHECK_FALSE(validate(neg));
  CHECK(negative_nodes(neg) == std::vector<BitString>{word("0")});
}

TEST_CASE("capital extends flatly beyond the table depth") {
  const Martingale d = depth2_fixture();
  CHECK(d.at(word("11")) == Rational(1, 4));
  CHECK(d.at(word("110")) == Rational(1, 4));
  CHECK(d.at(word("11010")) == Rational(1, 4));
}

TEST_CASE("multiplicative form round-trips") {
  const Martingale d = depth2_fixture();
  const MultiplicativeMartingale m = to_multiplicative(d);
  CHECK(m.root() == Rational(1));
  CHECK(m.ratio_at(word("0")) == Rational(3, 2));
  CHECK(m.ratio_at(word("1")) == Rational(1, 2));
  CHECK(m.ratio_at(word("00")) == Rational(4, 3));
  CHECK(m.ratio_at(word("11")) == Rational(1, 2));
  CHECK(from_multiplicative(m).nodes() == d.nodes());
}

TEST_CASE("multiplicative form requires positive capital") {
  const Martingale d(1, {Rational(1), Rational(2), Rational(0)});
  CHECK_THROWS_AS(to_multiplicative(d), ZeroCapitalNode);
}

TEST_CASE("multiplicative construction rejects unfair ratios") {
  CHECK_THROWS_AS(
      MultiplicativeMartingale(1, Rational(1), {Rational(1), Rational(3, 2)}),
      InvariantError);
  CHECK_THROWS_AS(
      MultiplicativeMartingale(1, Rational(-1), {Rational(1), Rational(1)}),
      InvariantError);
}

TEST_CASE("repair is the identity on valid tables") {
  const Martingale d = depth2_fixture();
  CHECK(repair_martingale(d.table(), d.root()).nodes() == d.nodes());
}

TEST_CASE("repair rebuilds unfair and negative candidates") {
  NodeTable cand{1, {Rational(5), Rational(3), Rational(3)}};
  const Martingale fixed = repair_martingale(cand, Rational(1));
  CHECK(validate(fixed));
  CHECK(fixed.nodes() ==
        std::vector<Rational>{Rational(1), Rational(2), Rational(0)});

  NodeTable neg{1, {Rational(1), Rational(-2), Rational(1)}};
  const Martingale fixed2 = repair_martingale(neg, Rational(-3));
  CHECK(validate(fixed2));
  CHECK(fixed2.root() == Rational(0));

  const Martingale again = repair_martingale(fixed.table(), fixed.root());
  CHECK(again.nodes() == fixed.nodes());
}

TEST_CASE("splits bet one coordinate against the oracle's other half") {
  const Martingale d = depth2_fixture();

  const Martingale even =
      split_van_lambalgen(d, Side::even, BitSource::from_word(word("1")), 1);
  CHECK(even.root() == d.root());
  CHECK(even.at(word("0")) == Rational(3, 2));
  CHECK(even.at(word("1")) == Rational(1, 2));
  CHECK(validate(even));

  const Martingale odd =
      split_van_lambalgen(d, Side::odd, BitSource::from_word(word("0")), 1);
  CHECK(odd.root() == Rational(1));
  CHECK(odd.at(word("0")) == Rational(4, 3));
  CHECK(odd.at(word("1")) == Rational(2, 3));
  CHECK(validate(odd));
}

TEST_CASE("split capitals multiply back to the original") {
  const Martingale d = depth2_fixture();
  for (std::uint64_t ai = 0; ai < 2; ++ai) {
    for (std::uint64_t bi = 0; bi < 2; ++bi) {
      const BitString a = BitString::from_cell_index(1, ai);
      const BitString b = BitString::from_cell_index(1, bi);
      const Martingale d0 =
          split_van_lambalgen(d, Side::even, BitSource::from_word(b), 1);
      const Martingale d1 =
          split_van_lambalgen(d, Side::odd, BitSource::from_word(a), 1);
      CHECK(d0.at(a) * d1.at(b) == d.at(interleave_word(a, b)));
    }
  }
}

TEST_CASE("split preconditions") {
  const Martingale d = depth2_fixture();
  CHECK_THROWS_AS(
      split_van_lambalgen(d, Side::even, BitSource::prng(1), 2),
      InvariantError);
  const Martingale zero(2, {Rational(1), Rational(2), Rational(0), Rational(4),
                            Rational(0), Rational(0), Rational(0)});
  CHECK_THROWS_AS(
      split_van_lambalgen(zero, Side::even, BitSource::prng(1), 1),
      ZeroCapitalNode);
}

TEST_CASE("trajectories record capital along the source") {
  const Martingale d = depth2_fixture();
  const CapitalTrajectory traj =
      run(d, BitSource::from_word(word("0111")), 4);
  CHECK(traj.capitals ==
        std::vector<Rational>{Rational(1), Rational(3, 2), Rational(1),
                              Rational(1), Rational(1)});
}

TEST_CASE("order functions and success monitoring") {
  CHECK(OrderFunction::identity().at(5) == 5);
  const OrderFunction f = OrderFunction::linear(2, 1);
  CHECK(f.at(3) == 7);
  CHECK(f.spec() == "linear:2n+1");
  CHECK(nondecreasing_on(f, 10));
  CHECK_THROWS_AS(OrderFunction::linear(0, 1), InvariantError);

  // ratio 3/2 on bit 1, 1/2 on bit 0: capital 27/8 after three 1s
  std::vector<Rational> nodes;
  for (unsigned level = 0; level <= 3; ++level) {
    for (std::size_t i = 0; i < (std::size_t{1} << level); ++i) {
      const BitString w = BitString::from_cell_index(level, i);
      Rational v(1);
      for (std::size_t k = 0; k < w.size(); ++k) {
        v *= w.bit(k) ? Rational(3, 2) : Rational(1, 2);
      }
      nodes.push_back(v);
    }
  }
  const Martingale d(3, std::move(nodes));
  REQUIRE(validate(d));
  const std::vector<std::size_t> hits = succeeds_against_order(
      d, BitSource::periodic(word("1")), OrderFunction::identity(), 3);
  CHECK(hits == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("conditional strategies bet proportionally to the set") {
  const OpenSetCode u = canonicalize(OpenSetCode(
      std::vector<Cylinder>{Cylinder(word("0"))}));
  const Martingale d = conditional_martingale(u);
  CHECK(d.root() == Rational(1));
  CHECK(d.at(word("0")) == Rational(2));
  CHECK(d.at(word("1")) == Rational(0));
  CHECK(validate(d));

  const Martingale raw = conditional_martingale_unnormalized(u);
  CHECK(raw.root() == Rational(1, 2));
  CHECK(raw.at(word("0")) == Rational(1));
  CHECK(raw.at(word("1")) == Rational(0));

  CHECK_THROWS_AS(conditional_martingale(OpenSetCode{}), ZeroMeasureSet);
}

}  // TEST_SUITE
