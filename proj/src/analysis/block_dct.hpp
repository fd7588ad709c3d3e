#pragma once

#include <array>

#include "grainkit/dct.hpp"

namespace grainkit::detail {

// Orthonormal 8x8 DCT of `block` (row-major). Adds AC energy marginals to
// h (coefficients (v >= 1, u) by u) and v (coefficients (k, u >= 1) by k) and
// returns the total AC energy.
inline double block_ac_energy(const std::array<double, 64>& block, std::array<double, 8>& h,
                              std::array<double, 8>& v) {
  static const dct::FloatDct kDct8(8);
  std::array<double, 64> coef;
  kDct8.forward(block, coef);
  double total = 0.0;
  for (int k = 0; k < 8; ++k) {
    for (int u = 0; u < 8; ++u) {
      if (k == 0 && u == 0) {
        continue;
      }
      const double e = coef[k * 8 + u] * coef[k * 8 + u];
      total += e;
      if (k >= 1) h[u] += e;
      if (u >= 1) v[k] += e;
    }
  }
  return total;
}

// Energy-weighted mean of the bin centres (k + 0.5) / 8.
inline double marginal_centroid(const std::array<double, 8>& e) {
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < 8; ++k) {
    num += e[k] * (k + 0.5) / 8.0;
    den += e[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace grainkit::detail
