#pragma once

#include <cstdint>
#include <initializer_list>

namespace dimp {

/// Mixes a master seed with a key path into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

/// xoshiro256** with portable draws: the same seed gives the same sequence on
/// every platform. Seeding is four splitmix64 steps, cheap enough to open one
/// stream per RR set.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(master, keys));
  }

  /// Uniform in [0, 1) on a 2^-53 grid.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// True with probability p (p >= 1 always succeeds).
  bool coin(double p) { return uniform01() < p; }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

// Substream domains, so that differently purposed streams never collide.
namespace stream {
inline constexpr std::uint64_t kBuild = 0x6275696c64;     // "build"
inline constexpr std::uint64_t kMix = 0x6d6978;           // "mix"
inline constexpr std::uint64_t kFresh = 0x6672657368;     // "fresh"
inline constexpr std::uint64_t kTrim = 0x7472696d;        // "trim"
inline constexpr std::uint64_t kUpdates = 0x757064;       // "upd"
inline constexpr std::uint64_t kMonteCarlo = 0x6d63;      // "mc"
inline constexpr std::uint64_t kSampleSize = 0x73697a65;  // "size"
}  // namespace stream

}  // namespace dimp
