#pragma once

// Portable random streams. std::mt19937_64 output is fixed by the standard;
// the boost::random distributions below have one header implementation, so
// draws are identical across toolchains (std:: distributions are not).

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <cstdint>
#include <random>

#include "rmom/linalg.hpp"

namespace rmom {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream used to generate problem instances.
inline Rng instance_stream(std::uint64_t seed) { return Rng(seed); }

/// Stream used for starting points; independent of the instance stream.
inline Rng init_stream(std::uint64_t seed) { return Rng(splitmix64(seed ^ 0x5EED1417ULL)); }

inline double standard_normal(Rng& rng) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  boost::random::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = standard_normal(rng);
    }
  }
  return m;
}

}  // namespace rmom
