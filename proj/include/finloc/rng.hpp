#pragma once

#include <cstdint>

namespace finloc {

// Deterministic 64-bit generator (splitmix64). The standard library's
// distributions are not specified bit-exactly across platforms; everything
// seeded must reproduce byte-identical instances, so draws go through this.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
};

}  // namespace finloc
