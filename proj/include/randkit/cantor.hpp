// randkit/cantor.hpp -- finite binary words, cylinders, open-set codes, and
// pure bit sources over the fair-coin measure.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randkit/rational.hpp"

namespace randkit {

// Finite word over {0,1}. Ordering is lexicographic with a proper prefix
// sorting before its extensions (vector comparison semantics).
class BitString {
 public:
  BitString() = default;
  static BitString from_string(std::string_view bits);  // '0'/'1' only
  // Depth-d word whose MSB-first value is `index` (index < 2^depth).
  static BitString from_cell_index(unsigned depth, std::uint64_t index);

  std::string str() const;
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int bit(std::size_t i) const { return bits_[i]; }
  void push_back(int b) { bits_.push_back(static_cast<std::uint8_t>(b & 1)); }

  BitString prefix(std::size_t n) const;  // n <= size
  BitString append(int b) const;
  bool is_prefix_of(const BitString& other) const;

  // MSB-first value of the word; size <= 63.
  std::uint64_t cell_index() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Basic open set [stem], or the empty set (serialized "∅"). The full space is
// the empty stem. measure([stem]) = 2^-|stem|.
class Cylinder {
 public:
  Cylinder() : stem_(BitString{}) {}  // full space
  explicit Cylinder(BitString stem) : stem_(std::move(stem)) {}
  static Cylinder empty_set();
  static Cylinder from_string(std::string_view text);

  bool is_empty_set() const { return !stem_.has_value(); }
  const BitString& stem() const;  // InvariantError on the empty set
  Rational measure() const;
  std::string str() const;

  friend bool operator==(const Cylinder&, const Cylinder&) = default;

 private:
  std::optional<BitString> stem_;
};

// Finite or streamed list of cylinders. Streamed codes are pure index ->
// cylinder rules; every read of a streamed code is bounded by an explicit
// inspection budget at the call site.
class OpenSetCode {
 public:
  OpenSetCode() : list_(std::vector<Cylinder>{}) {}  // empty set
  explicit OpenSetCode(std::vector<Cylinder> cylinders)
      : list_(std::move(cylinders)) {}
  explicit OpenSetCode(std::function<Cylinder(std::size_t)> stream)
      : stream_(std::move(stream)) {}

  bool finite() const { return list_.has_value(); }
  std::size_t size() const;                      // finite codes only
  const std::vector<Cylinder>& cylinders() const;  // finite codes only
  Cylinder at(std::size_t index) const;
  // Cylinders actually read under `budget`: min(budget, size) when finite.
  std::size_t inspect_count(std::size_t budget) const;

 private:
  std::optional<std::vector<Cylinder>> list_;
  std::function<Cylinder(std::size_t)> stream_;
};

// Prefix-free canonical form of the first `inspected` cylinders: empty
// markers dropped, covered stems dropped, complete sibling pairs merged to
// their parent until fixpoint, stems sorted ascending.
OpenSetCode canonicalize(const OpenSetCode& code, std::size_t inspected);
// Convenience for finite codes: inspects everything.
OpenSetCode canonicalize(const OpenSetCode& code);

Rational measure(const OpenSetCode& code, std::size_t inspected);
Rational measure(const OpenSetCode& code);

// Helpers on canonical (prefix-free, finite) codes.
bool covers_word(const OpenSetCode& canonical, const BitString& word);
unsigned max_stem_depth(const OpenSetCode& canonical);
// mu(U n [stem]), exact.
Rational measure_within(const OpenSetCode& canonical, const BitString& stem);
bool same_canonical(const OpenSetCode& a, const OpenSetCode& b);

// Partial map position -> bit arising from interleaving two finite words:
// even positions from the first word, odd positions from the second.
struct PartialInterleaving {
  std::map<std::size_t, int> assignments;
  bool total() const;       // the domain is an initial segment of naturals
  BitString word() const;   // requires total()
};

PartialInterleaving interleave(const BitString& even_word,
                               const BitString& odd_word);
// Total case only (|even| in {|odd|, |odd| + 1}); InvariantError otherwise.
BitString interleave_word(const BitString& even_word, const BitString& odd_word);

// Pure index -> bit rule tagged with a parseable description.
// Grammar: "periodic:011" | "rational:3/7" | "prng:seed=42" | "word:0110".
class BitSource {
 public:
  BitSource(std::function<int(std::size_t)> rule, std::string spec)
      : rule_(std::move(rule)), spec_(std::move(spec)) {}

  static BitSource periodic(const BitString& word);           // nonempty word
  static BitSource rational_expansion(const Rational& r);     // 0 <= r < 1
  static BitSource prng(std::uint64_t seed);
  static BitSource from_word(const BitString& word);          // word, then 0s
  static BitSource parse_spec(std::string_view spec);

  int bit(std::size_t index) const { return rule_(index); }
  BitString prefix(std::size_t length) const;
  const std::string& spec() const { return spec_; }

 private:
  std::function<int(std::size_t)> rule_;
  std::string spec_;
};

// The single source of interleaving parity: `even` lands on even positions.
BitSource join_sources(const BitSource& even, const BitSource& odd);
BitSource even_part(const BitSource& s);
BitSource odd_part(const BitSource& s);

// Cantor pairing <a, b> = (a+b)(a+b+1)/2 + b and its inverse.
std::size_t cantor_pair(std::size_t a, std::size_t b);
std::pair<std::size_t, std::size_t> cantor_unpair(std::size_t n);

}  // namespace randkit
