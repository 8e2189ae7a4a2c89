// tests/test_cauchy.cpp -- fast-converging Cauchy codes and their repair.
#include <doctest.h>

#include "randkit/cauchy.hpp"
#include "randkit/errors.hpp"
#include "randkit/rational.hpp"

using namespace randkit;

namespace {

bool pointwise_equal(const FastCauchyCode& a, const FastCauchyCode& b,
                     std::size_t last) {
  for (std::size_t i = 0; i <= last; ++i) {
    if (a.at(i) != b.at(i)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("cauchy") {

TEST_CASE("constant codes are valid at every inspected length") {
  const FastCauchyCode c = FastCauchyCode::constant(Rational(2, 3));
  CHECK(valid_prefix(c, 10));
  CHECK(approximate_limit(c, 7) == Rational(2, 3));
  REQUIRE(c.prefix().has_value());
  CHECK(c.prefix()->size() == 1);
}

TEST_CASE("prefix codes repeat the last entry") {
  const FastCauchyCode c =
      FastCauchyCode::from_prefix({Rational(1), Rational(1, 2), Rational(1, 2)});
  CHECK(valid_prefix(c, 8));
  CHECK(c.at(1) == Rational(1, 2));
  CHECK(c.at(10) == Rational(1, 2));
  REQUIRE(c.prefix().has_value());
  CHECK(c.prefix()->size() == 3);
  CHECK(approximate_limit(c, 5) == Rational(1, 2));
}

TEST_CASE("modulus violations are caught on the inspected prefix") {
  const FastCauchyCode c((FastCauchyCode::Generator)[](std::size_t i) {
    return Rational(static_cast<long>(i));
  });
  CHECK(valid_prefix(c, 1));  // |q1 - q0| = 1 <= 2^0
  CHECK_FALSE(valid_prefix(c, 2));
  CHECK_THROWS_AS(approximate_limit(c, 2), InvalidCode);
}

TEST_CASE("repair clamps negatives") {
  const FastCauchyCode raw =
      FastCauchyCode::from_prefix({Rational(-1), Rational(-1, 2)});
  const FastCauchyCode fixed = repair_fast_cauchy(raw);
  CHECK(valid_prefix(fixed, 8));
  CHECK(fixed.at(0) == Rational(0));
  CHECK(fixed.at(5) == Rational(0));
}

TEST_CASE("repair freezes the stream at the first violation") {
  // clamped stream 0, 1/4, 1 breaks the modulus at index 2: |1 - 1/4| > 1/2
  const FastCauchyCode raw =
      FastCauchyCode::from_prefix({Rational(0), Rational(1, 4), Rational(1)});
  const FastCauchyCode fixed = repair_fast_cauchy(raw);
  CHECK(valid_prefix(fixed, 10));
  CHECK(fixed.at(0) == Rational(0));
  CHECK(fixed.at(1) == Rational(1, 4));
  CHECK(fixed.at(2) == Rational(1, 4));
  CHECK(fixed.at(9) == Rational(1, 4));
}

TEST_CASE("repair is the identity on valid nonnegative codes") {
  const FastCauchyCode c =
      FastCauchyCode::from_prefix({Rational(1), Rational(1, 2), Rational(1, 2)});
  CHECK(pointwise_equal(repair_fast_cauchy(c), c, 10));
}

TEST_CASE("repair is idempotent") {
  const FastCauchyCode raw((FastCauchyCode::Generator)[](std::size_t i) {
    // alternating jumps, far outside any modulus
    return i % 2 == 0 ? Rational(3) : Rational(-2);
  });
  const FastCauchyCode once = repair_fast_cauchy(raw);
  const FastCauchyCode twice = repair_fast_cauchy(once);
  CHECK(valid_prefix(once, 12));
  CHECK(pointwise_equal(once, twice, 12));
}

}  // TEST_SUITE
