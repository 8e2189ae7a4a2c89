#include "randkit/cauchy.hpp"

#include <utility>

#include "randkit/errors.hpp"

namespace randkit {

namespace {

Rational clamped(const Rational& q) { return q.sign() < 0 ? Rational(0) : q; }

// Index of the first violation in the clamped stream, scanning entries
// 0..last; nullopt if none. A violation cannot occur at index 0.
std::optional<std::size_t> first_violation(const FastCauchyCode::Generator& gen,
                                           std::size_t last) {
  std::vector<Rational> c;
  c.reserve(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    c.push_back(clamped(gen(i)));
    for (std::size_t m = 0; m < i; ++m) {
      if ((c[i] - c[m]).abs() > Rational::pow2(-static_cast<long>(m))) {
        return i;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

FastCauchyCode::FastCauchyCode(Generator gen) : gen_(std::move(gen)) {}

FastCauchyCode FastCauchyCode::constant(const Rational& value) {
  return from_prefix({value});
}

FastCauchyCode FastCauchyCode::from_prefix(std::vector<Rational> prefix) {
  if (prefix.empty()) throw InvariantError("empty fast-Cauchy prefix");
  FastCauchyCode code([prefix](std::size_t i) {
    return i < prefix.size() ? prefix[i] : prefix.back();
  });
  code.prefix_ = std::move(prefix);
  return code;
}

bool valid_prefix(const FastCauchyCode& code, std::size_t last) {
  std::vector<Rational> q;
  q.reserve(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    q.push_back(code.at(i));
    for (std::size_t m = 0; m < i; ++m) {
      if ((q[i] - q[m]).abs() > Rational::pow2(-static_cast<long>(m))) {
        return false;
      }
    }
  }
  return true;
}

FastCauchyCode repair_fast_cauchy(const FastCauchyCode& raw) {
  if (raw.prefix().has_value()) {
    // Constant tails introduce no violation beyond the stored entries: any
    // pair (m, k) with k past the prefix repeats the pair (m, last).
    const auto& stored = *raw.prefix();
    const std::size_t last = stored.size() - 1;
    auto cut = first_violation([&stored](std::size_t i) { return stored[i]; },
                               last);
    std::vector<Rational> out;
    const std::size_t keep = cut.has_value() ? *cut : stored.size();
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(clamped(stored[i]));
    return FastCauchyCode::from_prefix(std::move(out));
  }
  auto base = [raw](std::size_t i) { return raw.at(i); };
  return FastCauchyCode([base](std::size_t index) -> Rational {
    auto cut = first_violation(base, index);
    if (cut.has_value()) return clamped(base(*cut - 1));
    return clamped(base(index));
  });
}

Rational approximate_limit(const FastCauchyCode& code, std::size_t index) {
  if (!valid_prefix(code, index)) {
    throw InvalidCode("fast-Cauchy modulus violated within inspected prefix");
  }
  return code.at(index);
}

}  // namespace randkit
