#pragma once

#include <cstdint>
#include <random>

namespace tmimo {

using Rng = std::mt19937_64;

/// Named substreams. Each frame owns one engine per stream so that e.g. the
/// channel draws can be replayed without touching the noise draws.
enum class Stream : std::uint64_t {
  kChannel = 1,
  kNoise = 2,
  kData = 3,
  kInterleaver = 4,
  kTest = 99,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for (master, frame, stream); stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t frame, Stream stream) {
  return splitmix64(splitmix64(splitmix64(master) ^ frame) ^ static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t frame, Stream stream) {
  return Rng(derive_seed(master, frame, stream));
}

}  // namespace tmimo
