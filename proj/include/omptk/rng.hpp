#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace omptk {

/// SplitMix64 step. Used for state expansion and seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of an independent substream from (seed, stream).
/// Chain calls to key a stream by several indices:
/// derive_seed(derive_seed(master, cell), trial).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed + 0xbf58476d1ce4e5b9ULL * (stream + 1);
  splitmix64(s);
  return splitmix64(s);
}

/// xoshiro256++ with SplitMix64 seeding. Sampling formulas are spelled out
/// (no std::*_distribution) so streams are bit-reproducible across standard
/// libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform integer on [0, bound), bound > 0. Multiplicative reduction; the
  /// bias is below bound/2^64 and irrelevant at our sample sizes.
  std::int64_t uniform_below(std::int64_t bound) {
    const auto wide = static_cast<unsigned __int128>(next_u64()) *
                      static_cast<std::uint64_t>(bound);
    return static_cast<std::int64_t>(wide >> 64);
  }

  /// +1 or -1 with equal probability.
  double rademacher() { return (next_u64() >> 63) ? -1.0 : 1.0; }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace omptk
