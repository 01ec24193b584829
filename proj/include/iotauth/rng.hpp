#pragma once

#include <cstdint>
#include <random>

namespace iotauth {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent stream per entity so scenario entities can be reordered or
// parallelized without perturbing each other's draws.
inline Rng fork_rng(std::uint64_t master_seed, std::uint64_t stream) {
  return Rng{splitmix64(master_seed ^ splitmix64(stream + 0x51ed2701))};
}

inline double gaussian(Rng& rng, double mean = 0.0, double stddev = 1.0) {
  std::normal_distribution<double> dist{mean, stddev};
  return dist(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  std::bernoulli_distribution dist{p};
  return dist(rng);
}

// Uniform draw from [0, n).
inline std::uint32_t uniform_index(Rng& rng, std::uint32_t n) {
  std::uniform_int_distribution<std::uint32_t> dist{0, n - 1};
  return dist(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist{lo, hi};
  return dist(rng);
}

}  // namespace iotauth
