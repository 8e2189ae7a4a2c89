// randkit/rational.hpp -- exact rational scalar for every quantity in the
// library. Canonical form throughout: lowest terms, positive denominator.
// No floating point appears anywhere downstream of this type.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace randkit {

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, lets literals flow
  Rational(long num, long den);

  // Accepts "p" or "p/q" with optional leading '-' on either part.
  // ParseError on anything else, including q = 0.
  static Rational from_string(std::string_view text);

  // 2^k for k of either sign.
  static Rational pow2(long k);

  // num/2^k, k >= 0.
  static Rational dyadic(long num, unsigned long k);

  // Canonical "p/q"; the denominator is always printed ("0" -> "0/1").
  std::string str() const;

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  Rational abs() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);  // InvariantError on zero divisor

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.v_, b.v_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c <=> 0;
  }

  const mpq_class& raw() const { return v_; }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) {}
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace randkit
