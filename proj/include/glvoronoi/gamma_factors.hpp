#pragma once

// The archimedean ratios G_+ and G_- of the twisted functional equations,
// assembled from log-gamma so that large |Im s| neither overflows nor underflows.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "glvoronoi/special.hpp"

namespace glv {

namespace detail {

inline cd gamma_ratio(cd s, std::span<const cd> lambda, double num_shift, double den_shift) {
  const double log_pi = std::log(std::numbers::pi);
  cd log_value = static_cast<double>(lambda.size()) * (s - 0.5) * log_pi;
  for (const cd& l : lambda) {
    const cd den = (s + den_shift - l) / 2.0;
    // 1/Gamma vanishes at the denominator's poles.
    if (near_nonpositive_integer(den)) return {0.0, 0.0};
  }
  for (const cd& l : lambda) {
    log_value += log_gamma((num_shift - s - std::conj(l)) / 2.0);
    log_value -= log_gamma((s + den_shift - l) / 2.0);
  }
  return std::exp(log_value);
}

}  // namespace detail

/// pi^{-n(1/2-s)} prod_j Gamma((1-s-conj l_j)/2) / Gamma((s-l_j)/2).
inline cd G_plus(cd s, std::span<const cd> lambda) { return detail::gamma_ratio(s, lambda, 1.0, 0.0); }

/// i^{-n} pi^{-n(1/2-s)} prod_j Gamma((2-s-conj l_j)/2) / Gamma((s+1-l_j)/2).
inline cd G_minus(cd s, std::span<const cd> lambda) {
  const int n = static_cast<int>(lambda.size());
  static constexpr cd powers[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};  // i^{-n}
  return powers[n % 4] * detail::gamma_ratio(s, lambda, 2.0, 1.0);
}

/// Real parts of the numerator gamma poles closest to the left: G_+ has poles at
/// s = 1 - conj(l_j) + 2j, G_- at s = 2 - conj(l_j) + 2j (j >= 0).
inline double first_pole_re(std::span<const cd> lambda, bool plus) {
  double best = 1e300;
  for (const cd& l : lambda) best = std::min(best, (plus ? 1.0 : 2.0) - l.real());
  return best;
}

}  // namespace glv
