#pragma once

#include <cstdint>
#include <random>

namespace mbqc {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Draws are defined bit-exactly (no
// std::*_distribution), so a seed reproduces the same outcomes on any
// conforming standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  // Stream for one shot: hashed seed XOR shot index. Hashing first keeps
  // the shot streams of nearby seeds disjoint (with a raw XOR, seeds 11 and
  // 12 would share the same set of streams over shots 0..255).
  static RngStream for_shot(std::uint64_t seed, std::uint64_t shot) { return RngStream(splitmix64(seed) ^ shot); }

  // Independent stream for client-side secrets of one shot, so secret
  // generation never shifts the measurement-outcome draws.
  static RngStream for_secrets(std::uint64_t seed, std::uint64_t shot) {
    return RngStream(splitmix64(seed ^ 0x5ec4e75ec4e75ec4ULL) ^ shot);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(next() >> 63); }

  // Uniform in [0, 8).
  int octant() { return static_cast<int>(next() >> 61); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mbqc
