#include "randkit/cantor.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "randkit/errors.hpp"
#include "randkit/mix64.hpp"

namespace randkit {

BitString BitString::from_string(std::string_view bits) {
  BitString w;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ParseError("bad bit string '" + std::string(bits) + "'");
    }
    w.push_back(c - '0');
  }
  return w;
}

BitString BitString::from_cell_index(unsigned depth, std::uint64_t index) {
  BitString w;
  for (unsigned i = 0; i < depth; ++i) {
    w.push_back(static_cast<int>((index >> (depth - 1 - i)) & 1));
  }
  return w;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitString BitString::prefix(std::size_t n) const {
  if (n > bits_.size()) throw PrefixTooShort("prefix longer than word");
  BitString w;
  w.bits_.assign(bits_.begin(), bits_.begin() + static_cast<long>(n));
  return w;
}

BitString BitString::append(int b) const {
  BitString w = *this;
  w.push_back(b);
  return w;
}

bool BitString::is_prefix_of(const BitString& other) const {
  if (bits_.size() > other.bits_.size()) return false;
  return std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::uint64_t BitString::cell_index() const {
  if (bits_.size() > 63) throw InvariantError("word too long for cell index");
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

Cylinder Cylinder::empty_set() {
  Cylinder c;
  c.stem_.reset();
  return c;
}

Cylinder Cylinder::from_string(std::string_view text) {
  if (text == "\xE2\x88\x85") return empty_set();
  return Cylinder(BitString::from_string(text));
}

const BitString& Cylinder::stem() const {
  if (!stem_.has_value()) throw InvariantError("empty set has no stem");
  return *stem_;
}

Rational Cylinder::measure() const {
  if (is_empty_set()) return Rational(0);
  return Rational::pow2(-static_cast<long>(stem_->size()));
}

std::string Cylinder::str() const {
  if (is_empty_set()) return "\xE2\x88\x85";
  return stem_->str();
}

std::size_t OpenSetCode::size() const {
  if (!finite()) throw InvariantError("streamed code has no size");
  return list_->size();
}

const std::vector<Cylinder>& OpenSetCode::cylinders() const {
  if (!finite()) throw InvariantError("streamed code has no cylinder list");
  return *list_;
}

Cylinder OpenSetCode::at(std::size_t index) const {
  if (finite()) {
    if (index >= list_->size()) throw InvariantError("cylinder index range");
    return (*list_)[index];
  }
  return stream_(index);
}

std::size_t OpenSetCode::inspect_count(std::size_t budget) const {
  return finite() ? std::min(budget, list_->size()) : budget;
}

OpenSetCode canonicalize(const OpenSetCode& code, std::size_t inspected) {
  std::vector<BitString> stems;
  const std::size_t n = code.inspect_count(inspected);
  for (std::size_t i = 0; i < n; ++i) {
    Cylinder c = code.at(i);
    if (!c.is_empty_set()) stems.push_back(c.stem());
  }
  // Drop covered stems: after sorting, a stem's extensions follow it directly.
  std::sort(stems.begin(), stems.end());
  std::set<BitString> keep;
  for (const auto& s : stems) {
    if (!keep.empty()) {
      auto it = keep.upper_bound(s);
      if (it != keep.begin() && std::prev(it)->is_prefix_of(s)) continue;
    }
    keep.insert(s);
  }
  // Merge complete sibling pairs bottom-up; a merge can cascade upward.
  std::size_t longest = 0;
  for (const auto& s : keep) longest = std::max(longest, s.size());
  for (std::size_t len = longest; len >= 1; --len) {
    std::vector<BitString> merged;
    for (const auto& s : keep) {
      if (s.size() == len && s.bit(len - 1) == 0) {
        BitString sib = s.prefix(len - 1).append(1);
        if (keep.count(sib)) merged.push_back(s.prefix(len - 1));
      }
    }
    for (const auto& parent : merged) {
      keep.erase(parent.append(0));
      keep.erase(parent.append(1));
      keep.insert(parent);
    }
  }
  std::vector<Cylinder> out;
  out.reserve(keep.size());
  for (const auto& s : keep) out.emplace_back(s);
  return OpenSetCode(std::move(out));
}

OpenSetCode canonicalize(const OpenSetCode& code) {
  return canonicalize(code, code.size());
}

Rational measure(const OpenSetCode& code, std::size_t inspected) {
  OpenSetCode canon = canonicalize(code, inspected);
  Rational total(0);
  for (const auto& c : canon.cylinders()) total += c.measure();
  return total;
}

Rational measure(const OpenSetCode& code) { return measure(code, code.size()); }

bool covers_word(const OpenSetCode& canonical, const BitString& word) {
  for (const auto& c : canonical.cylinders()) {
    if (!c.is_empty_set() && c.stem().is_prefix_of(word)) return true;
  }
  return false;
}

unsigned max_stem_depth(const OpenSetCode& canonical) {
  std::size_t d = 0;
  for (const auto& c : canonical.cylinders()) {
    if (!c.is_empty_set()) d = std::max(d, c.stem().size());
  }
  return static_cast<unsigned>(d);
}

Rational measure_within(const OpenSetCode& canonical, const BitString& stem) {
  Rational total(0);
  for (const auto& c : canonical.cylinders()) {
    if (c.is_empty_set()) continue;
    const BitString& s = c.stem();
    if (s.is_prefix_of(stem)) {
      // [stem] lies inside [s]; prefix-freeness rules out further overlap.
      return Rational::pow2(-static_cast<long>(stem.size()));
    }
    if (stem.is_prefix_of(s)) {
      total += Rational::pow2(-static_cast<long>(s.size()));
    }
  }
  return total;
}

bool same_canonical(const OpenSetCode& a, const OpenSetCode& b) {
  return a.cylinders() == b.cylinders();
}

bool PartialInterleaving::total() const {
  if (assignments.empty()) return true;
  return assignments.rbegin()->first + 1 == assignments.size();
}

BitString PartialInterleaving::word() const {
  if (!total()) throw InvariantError("interleaving is not a total word");
  BitString w;
  for (const auto& [pos, bit] : assignments) {
    (void)pos;
    w.push_back(bit);
  }
  return w;
}

PartialInterleaving interleave(const BitString& even_word,
                               const BitString& odd_word) {
  PartialInterleaving p;
  for (std::size_t i = 0; i < even_word.size(); ++i) {
    p.assignments[2 * i] = even_word.bit(i);
  }
  for (std::size_t i = 0; i < odd_word.size(); ++i) {
    p.assignments[2 * i + 1] = odd_word.bit(i);
  }
  return p;
}

BitString interleave_word(const BitString& even_word,
                          const BitString& odd_word) {
  return interleave(even_word, odd_word).word();
}

BitSource BitSource::periodic(const BitString& word) {
  if (word.empty()) throw InvariantError("periodic source needs a word");
  return BitSource(
      [word](std::size_t i) { return word.bit(i % word.size()); },
      "periodic:" + word.str());
}

BitSource BitSource::rational_expansion(const Rational& r) {
  if (r.sign() < 0 || r >= Rational(1)) {
    throw InvariantError("rational expansion needs 0 <= r < 1");
  }
  const mpz_class num = r.raw().get_num();
  const mpz_class den = r.raw().get_den();
  return BitSource(
      [num, den](std::size_t i) {
        // bit i = floor(r * 2^(i+1)) mod 2
        mpz_class shifted = num;
        mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), i + 1);
        mpz_class q = shifted / den;
        return static_cast<int>(mpz_odd_p(q.get_mpz_t()) ? 1 : 0);
      },
      "rational:" + r.str());
}

BitSource BitSource::prng(std::uint64_t seed) {
  return BitSource(
      [seed](std::size_t i) {
        return static_cast<int>(
            splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (i + 1))) & 1);
      },
      "prng:seed=" + std::to_string(seed));
}

BitSource BitSource::from_word(const BitString& word) {
  return BitSource(
      [word](std::size_t i) { return i < word.size() ? word.bit(i) : 0; },
      "word:" + word.str());
}

BitSource BitSource::parse_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("bad source spec '" + std::string(spec) + "'");
  }
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  try {
    if (head == "periodic") return periodic(BitString::from_string(rest));
    if (head == "rational") return rational_expansion(Rational::from_string(rest));
    if (head == "word") return from_word(BitString::from_string(rest));
    if (head == "prng") {
      constexpr std::string_view kSeed = "seed=";
      if (rest.substr(0, kSeed.size()) != kSeed) {
        throw ParseError("prng spec needs seed=");
      }
      const std::string digits(rest.substr(kSeed.size()));
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("bad prng seed");
      }
      try {
        return prng(std::stoull(digits));
      } catch (const std::out_of_range&) {
        throw ParseError("prng seed out of range");
      }
    }
  } catch (const InvariantError& e) {
    throw ParseError("bad source spec '" + std::string(spec) + "': " + e.what());
  }
  throw ParseError("unknown source rule '" + std::string(head) + "'");
}

BitString BitSource::prefix(std::size_t length) const {
  BitString w;
  for (std::size_t i = 0; i < length; ++i) w.push_back(rule_(i));
  return w;
}

BitSource join_sources(const BitSource& even, const BitSource& odd) {
  auto e = even;
  auto o = odd;
  return BitSource(
      [e, o](std::size_t i) {
        return i % 2 == 0 ? e.bit(i / 2) : o.bit(i / 2);
      },
      "join(" + even.spec() + ";" + odd.spec() + ")");
}

BitSource even_part(const BitSource& s) {
  auto inner = s;
  return BitSource([inner](std::size_t i) { return inner.bit(2 * i); },
                   "even(" + s.spec() + ")");
}

BitSource odd_part(const BitSource& s) {
  auto inner = s;
  return BitSource([inner](std::size_t i) { return inner.bit(2 * i + 1); },
                   "odd(" + s.spec() + ")");
}

std::size_t cantor_pair(std::size_t a, std::size_t b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t n) {
  std::size_t w = 0;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  const std::size_t b = n - w * (w + 1) / 2;
  return {w - b, b};
}

}  // namespace randkit
