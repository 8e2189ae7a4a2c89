// src/generate.cpp -- seeded fixture construction.
#include "randkit/generate.hpp"

#include <utility>
#include <vector>

#include "randkit/mix64.hpp"

namespace randkit {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64(state_);
}

std::uint64_t Rng::below(std::uint64_t bound) { return next() % bound; }

Rational Rng::small_dyadic() {
  return Rational::dyadic(static_cast<long>(below(8)), 3);
}

Martingale gen_martingale(std::uint64_t seed, unsigned depth) {
  Rng rng(seed);
  const Rational root =
      Rational::dyadic(static_cast<long>(rng.below(8)) + 1, 3);
  std::vector<Rational> ratios;
  const std::size_t count = NodeTable::node_count(depth) - 1;
  ratios.reserve(count);
  for (std::size_t i = 0; i < count; i += 2) {
    const Rational r =
        Rational::dyadic(static_cast<long>(rng.below(7)) + 1, 2);
    ratios.push_back(r);
    ratios.push_back(Rational(2) - r);
  }
  return from_multiplicative(MultiplicativeMartingale(depth, root, std::move(ratios)));
}

SchnorrTest gen_schnorr_test(std::uint64_t seed, std::size_t levels) {
  Rng rng(seed);
  std::vector<OpenSetCode> out;
  out.reserve(levels);
  for (std::size_t n = 1; n <= levels; ++n) {
    const unsigned depth = static_cast<unsigned>(n) + 2;
    const std::uint64_t cells = std::uint64_t{1} << depth;
    std::vector<Cylinder> list;
    const std::uint64_t count = rng.below(5);  // 4 * 2^-(n+2) = 2^-n
    for (std::uint64_t i = 0; i < count; ++i) {
      list.emplace_back(BitString::from_cell_index(depth, rng.below(cells)));
    }
    out.emplace_back(std::move(list));
  }
  return SchnorrTest(std::move(out));
}

LayeredFunction gen_layered(std::uint64_t seed, unsigned depth,
                            std::size_t layer_count) {
  Rng rng(seed);
  std::vector<StepFunction> layers;
  layers.reserve(layer_count);
  for (std::size_t k = 0; k < layer_count; ++k) {
    const unsigned d = static_cast<unsigned>(rng.below(depth + 1));
    std::vector<Rational> values;
    values.reserve(std::size_t{1} << d);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << d); ++i) {
      values.push_back(rng.small_dyadic());
    }
    layers.emplace_back(d, std::move(values));
  }
  return LayeredFunction(std::move(layers));
}

BitSource gen_source(std::uint64_t seed) {
  Rng rng(seed);
  switch (rng.below(4)) {
    case 0: {
      BitString word;
      const std::uint64_t len = 1 + rng.below(4);
      for (std::uint64_t i = 0; i < len; ++i) {
        word.push_back(static_cast<int>(rng.below(2)));
      }
      return BitSource::periodic(word);
    }
    case 1: {
      const long den = static_cast<long>(2 + rng.below(14));
      const long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(den)));
      return BitSource::rational_expansion(Rational(num, den));
    }
    case 2:
      return BitSource::prng(rng.next());
    default: {
      BitString word;
      const std::uint64_t len = 1 + rng.below(8);
      for (std::uint64_t i = 0; i < len; ++i) {
        word.push_back(static_cast<int>(rng.below(2)));
      }
      return BitSource::from_word(word);
    }
  }
}

}  // namespace randkit
