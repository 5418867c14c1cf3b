#pragma once

#include <cstdint>
#include <random>

namespace gtlab {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the independent sub-stream `index` derived from `master`.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Generator for sub-stream `index`; identical on every platform.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(stream_seed(master, index));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi] by rejection; independent of the standard
/// library's distribution implementations.
inline std::uint64_t uniform_int(std::mt19937_64& gen, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return gen();
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw = gen();
  while (draw >= limit) draw = gen();
  return lo + draw % span;
}

}  // namespace gtlab
