// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "glc/common.hpp"

namespace glc {

/// Integer lattice coordinates of the hypercube cell containing a state.
struct GridKey {
  std::vector<std::int64_t> coords;

  friend bool operator==(const GridKey&, const GridKey&) = default;
};

struct GridKeyHash {
  std::size_t operator()(const GridKey& key) const noexcept {
    // splitmix64 mixing over the coordinate vector
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ key.coords.size();
    for (std::int64_t c : key.coords) {
      std::uint64_t z = h + static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Writes floor(eta * x[i]) into key, reusing its storage.
inline void grid_key_into(std::span<const double> x, double eta, GridKey& key) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("grid_key: eta must be positive");
  key.coords.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double scaled = std::floor(eta * x[i]);
    if (!std::isfinite(scaled) || std::abs(scaled) > 9.0e18)
      throw InvalidArgument("grid_key: state is not finite or out of lattice range");
    key.coords[i] = static_cast<std::int64_t>(scaled);
  }
}

/// coords[i] = floor(eta * x[i]). Boundary points fall in the lower cell.
inline GridKey grid_key(std::span<const double> x, double eta) {
  GridKey key;
  grid_key_into(x, eta, key);
  return key;
}

/// True when a and b lie in the same partition cell.
inline bool equivalent(std::span<const double> a, std::span<const double> b, double eta) {
  return grid_key(a, eta) == grid_key(b, eta);
}

/// Euclidean radius bound of one cell, sqrt(n) / eta.
inline double cell_radius(std::size_t dim, double eta) {
  return std::sqrt(static_cast<double>(dim)) / eta;
}

}  // namespace glc
