#pragma once

#include <cstdint>
#include <random>

namespace snum {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named substreams of the run seed: (seed, stream) -> independent engine.
// Restart i of an oracle uses stream_for(seed, purpose, i).
enum class Stream : std::uint64_t { oracle_restart = 1, instance = 2, rotation = 3, family = 4, auerbach = 5 };

inline std::mt19937_64 stream_for(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) {
  const std::uint64_t a = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(purpose)));
  return std::mt19937_64(splitmix64(a + splitmix64(index + 0x51ed27ULL)));
}

}  // namespace snum
