#pragma once

#include <cmath>
#include <cstdint>

namespace anonmet {

// SplitMix64-based generator: counter-friendly, trivially seedable and
// bit-reproducible across platforms (no implementation-defined
// distributions). Used for every random draw in the library so that a seed
// fully determines the output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (pairs cached, sequence still fixed by
  // the seed alone).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Derive an independent stream key from (seed, counter); used for
  // per-copy sampling in the protocol simulator.
  static std::uint64_t key(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed ^ (counter * 0x9e3779b97f4a7c15ull + 0x52dce729ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace anonmet
