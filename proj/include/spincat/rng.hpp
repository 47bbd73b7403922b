#pragma once

#include <cstdint>
#include <random>

namespace spincat {

/// splitmix64 step; used to expand one master seed into decorrelated streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic per-stream seed: independent of scheduling or worker count.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream_index) {
  std::uint64_t s = master ^ (0xd1342543de82ef95ULL * (stream_index + 1));
  splitmix64(s);
  return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream_index) {
  return std::mt19937_64(stream_seed(master, stream_index));
}

}  // namespace spincat
