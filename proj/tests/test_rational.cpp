// tests/test_rational.cpp -- exact rational scalar.
#include <doctest.h>

#include <sstream>

#include "randkit/errors.hpp"
#include "randkit/rational.hpp"

using namespace randkit;

TEST_SUITE("rational") {

TEST_CASE("parsing accepts integers and fractions in lowest terms") {
  CHECK(Rational::from_string("3/4") == Rational(3, 4));
  CHECK(Rational::from_string("6/8") == Rational(3, 4));
  CHECK(Rational::from_string("-5") == Rational(-5));
  CHECK(Rational::from_string("7/-2") == Rational(-7, 2));
  CHECK(Rational::from_string("0") == Rational(0));
}

TEST_CASE("parsing rejects malformed input") {
  CHECK_THROWS_AS(Rational::from_string(""), ParseError);
  CHECK_THROWS_AS(Rational::from_string("abc"), ParseError);
  CHECK_THROWS_AS(Rational::from_string("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::from_string("1/2/3"), ParseError);
  CHECK_THROWS_AS(Rational::from_string("1.5"), ParseError);
  CHECK_THROWS_AS(Rational::from_string(" 1"), ParseError);
}

TEST_CASE("printing always includes the denominator") {
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(-5).str() == "-5/1");
  CHECK(Rational(2, -4).str() == "-1/2");
  std::ostringstream os;
  os << Rational(9, 6);
  CHECK(os.str() == "3/2");
}

TEST_CASE("powers of two and dyadics") {
  CHECK(Rational::pow2(0) == Rational(1));
  CHECK(Rational::pow2(3) == Rational(8));
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::dyadic(3, 2) == Rational(3, 4));
  CHECK(Rational::dyadic(5, 0) == Rational(5));
}

TEST_CASE("arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) - Rational(2, 3) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 3) / Rational(2, 3) == Rational(1, 2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), InvariantError);
}

TEST_CASE("ordering, sign, and absolute value") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1) < Rational(0));
  CHECK(Rational(7, 8) <= Rational(7, 8));
  CHECK(Rational(1, 2).sign() == 1);
  CHECK(Rational(0).is_zero());
  CHECK(Rational(-3, 4).abs() == Rational(3, 4));
}

}  // TEST_SUITE
