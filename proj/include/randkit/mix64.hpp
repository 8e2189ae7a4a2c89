// randkit/mix64.hpp -- splitmix64 finalizer; the only randomness primitive.
#pragma once

#include <cstdint>

namespace randkit {

// Deterministic across platforms; used by prng bit sources and fixture
// generation so emitted files are byte-identical everywhere.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace randkit
