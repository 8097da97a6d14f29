#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "anormal/numerics.hpp"

namespace anormal::lab::detail {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the tag, mixed with the seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h ^ splitmix64(seed));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

ComplexMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
ComplexMatrix random_unitary(Rng& rng, Eigen::Index k);
/// G = U diag(s) V^* with singular values s in [0.7, 1.4].
ComplexMatrix well_conditioned(Rng& rng, Eigen::Index k);
Complex unit_phase(Rng& rng);
/// r e^{i theta} with r in [0.6, 1.6].
Complex moderate_scalar(Rng& rng);

}  // namespace anormal::lab::detail
