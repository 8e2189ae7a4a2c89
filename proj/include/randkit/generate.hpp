// randkit/generate.hpp -- deterministic fixture generators. Everything is
// driven by one 64-bit mixing function, so equal seeds give byte-identical
// objects on every platform.
#pragma once

#include <cstddef>
#include <cstdint>

#include "randkit/cantor.hpp"
#include "randkit/martingale.hpp"
#include "randkit/stepfn.hpp"
#include "randkit/tests.hpp"

namespace randkit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  // Uniform-ish draw in [0, bound); bound >= 1. Modulo bias is irrelevant
  // here: draws only seed fixtures, determinism is what matters.
  std::uint64_t below(std::uint64_t bound);
  // Dyadic value a / 2^k with a < 2^k * cap_num / cap_den... kept simple:
  // a / 8 with a in [0, 8).
  Rational small_dyadic();

 private:
  std::uint64_t state_;
};

// Strictly positive valid martingale: random root (1/8 .. 1) and random
// multiplicative ratios in {1/4, ..., 7/4}.
Martingale gen_martingale(std::uint64_t seed, unsigned depth);

// Level n holds up to four cylinders at depth n + 2, so mu(U_n) <= 2^-n
// holds by construction for any draw.
SchnorrTest gen_schnorr_test(std::uint64_t seed, std::size_t levels);

// Layer stack with per-layer depth <= depth and dyadic cell values in
// [0, 7/8].
LayeredFunction gen_layered(std::uint64_t seed, unsigned depth,
                            std::size_t layer_count);

// One of: periodic, rational expansion, mixed-bit generator, padded word.
BitSource gen_source(std::uint64_t seed);

}  // namespace randkit
