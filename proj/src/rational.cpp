#include "randkit/rational.hpp"

#include <cctype>
#include <ostream>

#include "randkit/errors.hpp"

namespace randkit {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool signed_digits(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return all_digits(s);
}

}  // namespace

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw InvariantError("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::from_string(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  if (!signed_digits(num)) {
    throw ParseError("bad rational literal '" + std::string(text) + "'");
  }
  if (slash != std::string_view::npos) {
    std::string_view den = text.substr(slash + 1);
    if (!signed_digits(den)) {
      throw ParseError("bad rational literal '" + std::string(text) + "'");
    }
  }
  mpq_class v(std::string(text), 10);
  if (sgn(v.get_den()) == 0) {
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  v.canonicalize();
  return Rational(std::move(v));
}

Rational Rational::pow2(long k) {
  mpz_class top = 1;
  mpz_class bottom = 1;
  if (k >= 0) {
    top <<= static_cast<unsigned long>(k);
  } else {
    bottom <<= static_cast<unsigned long>(-k);
  }
  return Rational(mpq_class(top, bottom));
}

Rational Rational::dyadic(long num, unsigned long k) {
  mpz_class bottom = 1;
  bottom <<= k;
  mpq_class v(mpz_class(num), bottom);
  v.canonicalize();
  return Rational(std::move(v));
}

std::string Rational::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(v_))); }

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvariantError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.v_ + b.v_));
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.v_ - b.v_));
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.v_ * b.v_));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw InvariantError("division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace randkit
