#pragma once

#include <cstdint>

namespace towpde {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with an explicit uint64 -> double conversion. We do not use
// <random> distributions because their output is not pinned across standard
// library implementations; artifact CSVs must be byte-identical everywhere.
class Xoshiro256pp {
 public:
  Xoshiro256pp() : Xoshiro256pp(0, 0) {}
  Xoshiro256pp(uint64_t seed, uint64_t stream) {
    uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Master seed plus counter-based stream derivation: stream i of the same spec
// is bit-identical on every platform and independent of evaluation order.
struct RngSpec {
  uint64_t master_seed = 0;
  Xoshiro256pp stream(uint64_t index) const { return Xoshiro256pp(master_seed, index); }
};

}  // namespace towpde
