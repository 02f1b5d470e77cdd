#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fierg {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream derivation: the same (seed, tags...) always yields the
// same generator, independent of which thread asks for it.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t tag : tags) h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(seed, tags));
}

// Stream purposes, used as the first tag.
namespace stream {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kTheta = 2;
inline constexpr std::uint64_t kHyper = 3;
inline constexpr std::uint64_t kSlice = 4;
inline constexpr std::uint64_t kTruth = 5;
inline constexpr std::uint64_t kPpc = 6;
inline constexpr std::uint64_t kGroups = 7;
}  // namespace stream

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double std_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace fierg
