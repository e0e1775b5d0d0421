// Counter-based splittable random number generation.
//
// Every draw is a pure function of (seed, stream, a, b), so values never
// depend on generation order or thread count. Streams separate the
// independent random sources of an instance (subspace, regressors,
// covariates, noise, shuffles, sweep cells).

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace mllam::rng {

inline constexpr std::uint64_t kStreamSubspace = 1;
inline constexpr std::uint64_t kStreamRegressor = 2;
inline constexpr std::uint64_t kStreamExample = 3;
inline constexpr std::uint64_t kStreamNoise = 4;
inline constexpr std::uint64_t kStreamShuffle = 5;
inline constexpr std::uint64_t kStreamCell = 6;
inline constexpr std::uint64_t kStreamDerived = 7;

// SplitMix64 finalizer; full avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Keyed hash of (seed, stream, a, b); the mixing chain absorbs one word
// per round so distinct keys give independent-looking outputs.
constexpr std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return h;
}

// Map 64 random bits to (0, 1]; never returns 0 so log() stays finite.
constexpr double unit_open(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal draw addressed by (seed, stream, a, counter).
inline double gaussian(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t a, std::uint64_t counter) noexcept {
  const double u = unit_open(keyed(seed, stream, a, 2 * counter));
  const double v = unit_open(keyed(seed, stream, a, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

// Unbiased-enough integer in [0, bound) via 128-bit multiply.
constexpr std::uint64_t uniform_below(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t a, std::uint64_t bound) noexcept {
  const auto wide = static_cast<unsigned __int128>(keyed(seed, stream, a, bound));
  return static_cast<std::uint64_t>((wide * bound) >> 64);
}

// Deterministic Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<int> shuffled_indices(int n, std::uint64_t seed) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_below(
        seed, kStreamShuffle, static_cast<std::uint64_t>(i),
        static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return idx;
}

}  // namespace mllam::rng
