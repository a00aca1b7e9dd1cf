// Seeded random streams. Each module draws from its own named substream so
// that adding draws in one place does not shift another module's sequence.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stabpack {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t seed, std::string_view name) {
  return Rng(stream_seed(seed, name));
}

}  // namespace stabpack
