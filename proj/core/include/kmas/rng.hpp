#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kmas {

// Reproducible random stream. mt19937_64 is fully specified by the standard;
// the bounded-int and uniform-double draws below are implemented here rather
// than with std:: distributions (whose output is implementation-defined), so
// identical seeds give identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // splitmix64 finalizer; good avalanche for deriving substream keys.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Independent substream addressed by a path of integers, e.g.
  // Rng::stream(seed, {kStreamNegatives, iteration, position}).
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = mix(seed);
    for (std::uint64_t v : path) k = mix(k ^ mix(v));
    return Rng(k);
  }

  std::uint64_t next_u64() { return eng_(); }

  // Unbiased integer in [0, n); n >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // 53-bit uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 eng_;
};

// Stream tags so separate consumers never collide.
inline constexpr std::uint64_t kStreamParamInit = 0x01;
inline constexpr std::uint64_t kStreamBatch = 0x02;
inline constexpr std::uint64_t kStreamNegatives = 0x03;

}  // namespace kmas
