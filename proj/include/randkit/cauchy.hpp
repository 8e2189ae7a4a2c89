// randkit/cauchy.hpp -- fast-converging Cauchy codes over exact rationals.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "randkit/rational.hpp"

namespace randkit {

// Index -> value stream q_0, q_1, ...  A code is valid when
// |q_n - q_m| <= 2^-m for every n >= m; validity is only ever checked on the
// inspected prefix. Streams built from a finite prefix repeat the last entry
// forever and stay serializable; generator-built streams are pure and
// recomputed per index (no shared mutable state).
class FastCauchyCode {
 public:
  using Generator = std::function<Rational(std::size_t)>;

  explicit FastCauchyCode(Generator gen);
  static FastCauchyCode constant(const Rational& value);
  static FastCauchyCode from_prefix(std::vector<Rational> prefix);  // nonempty

  Rational at(std::size_t index) const { return gen_(index); }

  // Set when the code was built from a finite prefix (constant tail).
  const std::optional<std::vector<Rational>>& prefix() const { return prefix_; }

 private:
  Generator gen_;
  std::optional<std::vector<Rational>> prefix_;
};

// |q_k - q_m| <= 2^-m for all m <= k <= last.
bool valid_prefix(const FastCauchyCode& code, std::size_t last);

// Totalizing repair: clamp each entry to max{q, 0}; then, if n is the first
// index where the clamped stream violates |q_n - q_m| <= 2^-m for some m <= n,
// freeze the stream at q_{n-1} from n on. Identity on valid nonnegative codes;
// the output is always a valid nonnegative code. Entry i depends only on the
// raw prefix [0..i].
FastCauchyCode repair_fast_cauchy(const FastCauchyCode& raw);

// q_index after validating the inspected prefix [0..index]; InvalidCode if the
// prefix violates the modulus.
Rational approximate_limit(const FastCauchyCode& code, std::size_t index);

}  // namespace randkit
