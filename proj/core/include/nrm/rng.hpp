#pragma once

#include <cstdint>

namespace nrm {

// Counter-based generator: every draw is a pure function of
// (seed, replication, period, slot).  Replications are order-independent
// and safe to generate from any thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replication)
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(replication + 0x6a09e667f3bcc909ull)) {}

  // Uniform double in [0, 1).
  double uniform(std::uint64_t period, std::uint64_t slot) const {
    return to_unit(mix(key_ ^ mix(period * 2ull + 0x3c6ef372fe94f82bull) ^
                       mix(slot + 0xbb67ae8584caa73bull)));
  }

  std::uint64_t bits(std::uint64_t period, std::uint64_t slot) const {
    return mix(key_ ^ mix(period * 2ull + 0x3c6ef372fe94f82bull) ^
               mix(slot + 0xbb67ae8584caa73bull));
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
};

}  // namespace nrm
