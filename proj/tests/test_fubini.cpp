// tests/test_fubini.cpp -- sections, marginals, budget rescaling, and the
// oracle-indexed family of budgeted sections.
#include <doctest.h>

#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/errors.hpp"
#include "randkit/layering.hpp"
#include "randkit/rational.hpp"
#include "randkit/stepfn.hpp"

using namespace randkit;

namespace {

BitString word(const char* s) { return BitString::from_string(s); }

// t(Z) = 1 when Z = (X, Y) has X(0) = 1 and Y(0) = 1; depth-2 single layer.
// Cell order on the interleaved grid: 00, 01, 10, 11 with X at bit 0.
LayeredFunction corner_product() {
  return LayeredFunction({StepFunction(
      2, {Rational(0), Rational(0), Rational(0), Rational(1)})});
}

// two layers on a depth-3 grid (X gets two bits, Y one)
LayeredFunction odd_depth_stack() {
  return LayeredFunction(
      {StepFunction(3, {Rational(1), Rational(0), Rational(0), Rational(0),
                        Rational(0), Rational(0), Rational(0), Rational(1)}),
       StepFunction(1, {Rational(0), Rational(1, 2)})});
}

}  // namespace

TEST_SUITE("fubini") {

TEST_CASE("sections fix the even coordinate") {
  const LayeredFunction t = corner_product();
  const LayeredFunction at1 = section(t, word("1"));
  CHECK(at1.layers().size() == 1);
  CHECK(at1.depth() == 1);
  CHECK(at1.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(1)});
  CHECK(at1.declared_integral() == Rational(1, 2));

  const LayeredFunction at0 = section(t, word("0"));
  CHECK(at0.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(0)});

  // longer prefixes are trimmed to the declared use
  CHECK(section(t, word("10")).flatten().values() == at1.flatten().values());
  CHECK_THROWS_AS(section(t, BitString{}), PrefixTooShort);
}

TEST_CASE("sections at odd depth read interleaved cells") {
  const LayeredFunction t = odd_depth_stack();
  // X = 11: cells 1Y1 of layer one plus the Y-independent second layer
  const LayeredFunction s = section(t, word("11"));
  CHECK(s.layers().size() == 2);
  CHECK(s.depth() == 1);
  // layer one at (X=11, Y=w): word w0=110 -> 0, w1=111 -> 1
  CHECK(s.layers()[0].values() ==
        std::vector<Rational>{Rational(0), Rational(1)});
  // layer two depends on bit 0 of the interleaved word, which is X(0) = 1
  CHECK(s.layers()[1].values() ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

  const LayeredFunction s00 = section(t, word("00"));
  CHECK(s00.flatten().values() ==
        std::vector<Rational>{Rational(1), Rational(0)});
}

TEST_CASE("marginals average the odd coordinate layer by layer") {
  const LayeredFunction u = marginal(corner_product());
  CHECK(u.layers().size() == 1);
  CHECK(u.depth() == 1);
  CHECK(u.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(1, 2)});
  CHECK(u.declared_integral() == corner_product().declared_integral());

  const LayeredFunction u2 = marginal(odd_depth_stack());
  CHECK(u2.depth() == 2);
  CHECK(u2.declared_integral() == odd_depth_stack().declared_integral());
  // layer one averages to 1/2 on X in {00, 11}, zero elsewhere
  CHECK(u2.layers()[0].values() ==
        std::vector<Rational>{Rational(1, 2), Rational(0), Rational(0),
                              Rational(1, 2)});
  // layer two is a function of X alone and survives unchanged
  CHECK(u2.layers()[1].values() ==
        std::vector<Rational>{Rational(0), Rational(0), Rational(1, 2),
                              Rational(1, 2)});
}

TEST_CASE("the marginal of a section integrates the section exactly") {
  const LayeredFunction t = odd_depth_stack();
  const LayeredFunction u = marginal(t);
  for (std::uint64_t x = 0; x < 4; ++x) {
    const BitString xw = BitString::from_cell_index(2, x);
    CHECK(section(t, xw).declared_integral() == evaluate(u.flatten(), xw));
  }
}

TEST_CASE("rescaling truncates the stack at the budget") {
  const LayeredFunction tX(
      {StepFunction::constant(Rational(1, 2)),
       StepFunction(1, {Rational(0), Rational(1)})});
  REQUIRE(tX.declared_integral() == Rational(1));

  const LayeredFunction mid = rescale_to_budget(tX, Rational(3, 4));
  CHECK(mid.layers()[0].values() == tX.layers()[0].values());
  CHECK(mid.layers()[1].values() ==
        std::vector<Rational>{Rational(0), Rational(1, 2)});
  CHECK(mid.declared_integral() == Rational(3, 4));

  const LayeredFunction zero = rescale_to_budget(tX, Rational(0));
  CHECK(zero.declared_integral() == Rational(0));
  CHECK(zero.layers()[0].values() == std::vector<Rational>{Rational(0)});

  const LayeredFunction exact = rescale_to_budget(tX, Rational(1, 2));
  CHECK(exact.layers()[0].values() == tX.layers()[0].values());
  CHECK(exact.layers()[1].values() ==
        std::vector<Rational>{Rational(0), Rational(0)});

  const LayeredFunction full = rescale_to_budget(tX, Rational(1));
  CHECK(full.layers()[0].values() == tX.layers()[0].values());
  CHECK(full.layers()[1].values() == tX.layers()[1].values());

  CHECK_THROWS_AS(rescale_to_budget(tX, Rational(2)), BudgetOutOfRange);
  CHECK_THROWS_AS(rescale_to_budget(tX, Rational(-1, 4)), BudgetOutOfRange);
}

TEST_CASE("zero-integral layers pass through rescaling") {
  const LayeredFunction tX({StepFunction::constant(Rational(0), 1),
                            StepFunction::constant(Rational(1, 4))});
  const LayeredFunction r = rescale_to_budget(tX, Rational(1, 8));
  CHECK(r.layers()[0].values() ==
        std::vector<Rational>{Rational(0), Rational(0)});
  CHECK(r.layers()[1].values() == std::vector<Rational>{Rational(1, 8)});
  CHECK(r.declared_integral() == Rational(1, 8));
}

TEST_CASE("the assembled family reads budgets off the plan") {
  const LayeredFunction t = corner_product();
  const UniformIntegralFamily family =
      assemble_uniform_family(t, saturation_horizon(marginal(t)));
  CHECK(family.use_bound == 1);
  CHECK(family.plan.saturated);
  CHECK(family.margin.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(1, 2)});

  const BitSource x1 = BitSource::periodic(word("1"));
  const BitSource x0 = BitSource::from_word(word("0"));

  // saturated plan: the approximant value equals the marginal everywhere
  CHECK(family.budget_at(x1) == Rational(1, 2));
  CHECK(family.budget_at(x0) == Rational(0));
  CHECK(family.level_at(x1) == 0);

  const LayeredFunction at1 = family.family_at(x1);
  CHECK(at1.declared_integral() == Rational(1, 2));
  CHECK(at1.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(1)});
  const LayeredFunction at0 = family.family_at(x0);
  CHECK(at0.declared_integral() == Rational(0));
  CHECK(at0.flatten().values() ==
        std::vector<Rational>{Rational(0), Rational(0)});
}

TEST_CASE("family budgets agree with sections on every grid cell") {
  const LayeredFunction t = odd_depth_stack();
  const UniformIntegralFamily family =
      assemble_uniform_family(t, saturation_horizon(marginal(t)));
  CHECK(family.use_bound == 2);
  const StepFunction u = family.margin.flatten();
  for (std::uint64_t x = 0; x < 4; ++x) {
    const BitString xw = BitString::from_cell_index(2, x);
    const BitSource oracle = BitSource::from_word(xw);
    const Rational h = family.budget_at(oracle);
    const LayeredFunction member = family.family_at(oracle);
    CHECK(member.declared_integral() == h);
    // saturated plans put h(X) = u(X), so members are entire sections
    CHECK(h == u.cell_value(x));
    CHECK(member.flatten().values() ==
          section(t, xw).flatten().values());
  }
}

}  // TEST_SUITE
