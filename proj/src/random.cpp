#include "dimp/random.hpp"

namespace dimp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t key : keys) h = splitmix64(h ^ splitmix64(key));
  return h;
}

Rng::Rng(std::uint64_t seed) {
  // The splitmix64 sequence starting at seed.
  for (std::uint64_t i = 0; i < 4; ++i) s_[i] = splitmix64(seed + i * 0x9e3779b97f4a7c15ULL);
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  // Rejection of the short tail keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace dimp
