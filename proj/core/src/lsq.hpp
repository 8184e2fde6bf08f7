#pragma once

#include <array>
#include <cmath>
#include <span>

#include "ghost/errors.hpp"

namespace ghost::detail {

/// Weighted least squares y ~ c0 + c1 x + c2 x^2. Callers should centre and
/// scale x to O(1) first.
inline std::array<double, 3> fit_quadratic(std::span<const double> x, std::span<const double> y,
                                           std::span<const double> w) {
  std::array<double, 5> sx{};  // sum w x^k, k = 0..4
  std::array<double, 3> sy{};  // sum w y x^k
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = w[i];
    for (std::size_t k = 0; k < 5; ++k) {
      sx[k] += p;
      if (k < 3) sy[k] += p * y[i];
      p *= x[i];
    }
  }
  // Cramer's rule on the symmetric normal equations.
  const double a = sx[0], b = sx[1], c = sx[2], d = sx[3], e = sx[4];
  const double det = a * (c * e - d * d) - b * (b * e - c * d) + c * (b * d - c * c);
  if (!(std::abs(det) > 1e-300)) throw AnalysisError("degenerate least-squares fit");
  const double r0 = sy[0], r1 = sy[1], r2 = sy[2];
  const double c0 = (r0 * (c * e - d * d) - b * (r1 * e - r2 * d) + c * (r1 * d - r2 * c)) / det;
  const double c1 = (a * (r1 * e - r2 * d) - r0 * (b * e - c * d) + c * (b * r2 - c * r1)) / det;
  const double c2 = (a * (c * r2 - d * r1) - b * (b * r2 - c * r1) + r0 * (b * d - c * c)) / det;
  return {c0, c1, c2};
}

}  // namespace ghost::detail
