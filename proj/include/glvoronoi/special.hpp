#pragma once

// Complex log-gamma and Hurwitz zeta, plus weighted Hurwitz combinations whose
// s = 1 poles cancel (this is how nontrivial Dirichlet L-values are reached).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>

#include <boost/math/special_functions/bernoulli.hpp>

#include "glvoronoi/arith.hpp"

namespace glv {

namespace detail {

inline constexpr int bernoulli_terms = 40;

/// B_2, B_4, ..., B_{2*bernoulli_terms}.
inline const std::array<double, bernoulli_terms>& bernoulli_table() {
  static const std::array<double, bernoulli_terms> table = [] {
    std::array<double, bernoulli_terms> b{};
    for (int j = 0; j < bernoulli_terms; ++j)
      b[static_cast<std::size_t>(j)] = boost::math::bernoulli_b2n<double>(j + 1);
    return b;
  }();
  return table;
}

/// log sin(pi z) on some branch; stable for large |Im z|.
inline cd log_sin_pi(cd z) {
  const cd w = std::numbers::pi * z;
  const cd i{0.0, 1.0};
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  if (w.imag() > 0.0) return -i * w + std::log(1.0 - std::exp(2.0 * i * w)) - std::log(-2.0 * i);
  return i * w + std::log(1.0 - std::exp(-2.0 * i * w)) - std::log(2.0 * i);
}

/// Stirling series for |z| large and Re z > 0.
inline cd log_gamma_stirling(cd z) {
  const auto& b = bernoulli_table();
  cd result = (z - 0.5) * std::log(z) - z + 0.5 * std::log(two_pi);
  const cd inv = 1.0 / z;
  const cd inv2 = inv * inv;
  cd power = inv;
  for (int j = 1; j <= 12; ++j) {
    const cd term = b[static_cast<std::size_t>(j - 1)] / (2.0 * j * (2.0 * j - 1.0)) * power;
    result += term;
    if (std::abs(term) < 1e-18 * std::abs(result)) break;
    power *= inv2;
  }
  return result;
}

inline bool near_nonpositive_integer(cd z) {
  return z.real() < 0.5 && std::abs(z.imag()) < 1e-12 &&
         std::abs(z.real() - std::round(z.real())) < 1e-12;
}

}  // namespace detail

/// log Gamma(z) up to a multiple of 2 pi i. Only exp() of sums of these values
/// is used downstream, so the branch is immaterial.
inline cd log_gamma(cd z) {
  if (detail::near_nonpositive_integer(z))
    throw pole_error("log_gamma: pole at z = " + std::to_string(z.real()));
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(std::numbers::pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
  }
  constexpr double shift_threshold = 15.0;
  if (std::abs(z) >= shift_threshold) return detail::log_gamma_stirling(z);
  // Recurrence up to |z| >= threshold; the product stays small so one log suffices.
  cd product{1.0, 0.0};
  cd w = z;
  while (std::abs(w) < shift_threshold) {
    product *= w;
    w += 1.0;
  }
  return detail::log_gamma_stirling(w) - std::log(product);
}

inline cd gamma(cd z) { return std::exp(log_gamma(z)); }

namespace detail {

/// (e^z - 1)/z, with the removable singularity filled in.
inline cd expm1_over(cd z) {
  if (std::abs(z) < 1e-3) {
    cd term{1.0, 0.0}, sum{1.0, 0.0};
    for (int j = 2; j < 12; ++j) {
      term *= z / static_cast<double>(j);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

/// Euler-Maclaurin value of zeta(s, a) without its (N+a)^{1-s}/(s-1) term, which
/// callers add back themselves (or cancel across a weighted combination).
struct HurwitzParts {
  cd regular;
  int cutoff;
};

inline HurwitzParts hurwitz_regular(cd s, double a, int cutoff) {
  const auto& b = bernoulli_table();
  cd sum{0.0, 0.0};
  for (int k = 0; k < cutoff; ++k) sum += std::exp(-s * std::log(k + a));
  const double base = cutoff + a;
  const double log_base = std::log(base);
  const cd base_pow = std::exp(-s * log_base);  // (N+a)^{-s}
  sum += 0.5 * base_pow;
  // Tail sum_j B_2j/(2j)! s(s+1)...(s+2j-2) (N+a)^{-s-2j+1}.
  cd rising = s;
  cd power = base_pow / base;
  double factorial = 2.0;
  const double inv_base2 = 1.0 / (base * base);
  for (int j = 1; j <= bernoulli_terms; ++j) {
    const cd term = b[static_cast<std::size_t>(j - 1)] / factorial * rising * power;
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
    power *= inv_base2;
    factorial *= static_cast<double>(2 * j + 1) * static_cast<double>(2 * j + 2);
  }
  return {sum, cutoff};
}

inline int hurwitz_cutoff(cd s) { return 15 + static_cast<int>(std::ceil(std::abs(s))); }

}  // namespace detail

inline constexpr double pole_tolerance = 1e-8;

/// zeta(s, a) = sum_{k>=0} (k+a)^{-s}, continued to s != 1.
inline cd hurwitz_zeta(cd s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw domain_error("hurwitz_zeta: a must lie in (0,1]");
  if (std::abs(s - 1.0) < pole_tolerance)
    throw pole_error("hurwitz_zeta: s within 1e-8 of the pole at s = 1");
  const int cutoff = detail::hurwitz_cutoff(s);
  const auto parts = detail::hurwitz_regular(s, a, cutoff);
  const double base = cutoff + a;
  return parts.regular + std::exp((1.0 - s) * std::log(base)) / (s - 1.0);
}

inline cd riemann_zeta(cd s) { return hurwitz_zeta(s, 1.0); }

/// sum_r weights[r] * zeta(s, shifts[r]). When the weights sum to zero the
/// pole at s = 1 cancels and the combination is evaluated there as well.
inline cd hurwitz_combination(cd s, std::span<const cd> weights, std::span<const double> shifts) {
  if (weights.size() != shifts.size())
    throw domain_error("hurwitz_combination: weights and shifts differ in length");
  cd weight_total{0.0, 0.0};
  double weight_scale = 0.0;
  for (const cd& w : weights) {
    weight_total += w;
    weight_scale += std::abs(w);
  }
  const bool cancels = std::abs(weight_total) <= 1e-12 * std::max(1.0, weight_scale);
  if (!cancels && std::abs(s - 1.0) < pole_tolerance)
    throw pole_error("hurwitz_combination: s within 1e-8 of the pole at s = 1");
  const int cutoff = detail::hurwitz_cutoff(s);
  cd regular{0.0, 0.0};
  cd pole_part{0.0, 0.0};
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (weights[r] == cd{0.0, 0.0}) continue;
    const double a = shifts[r];
    if (!(a > 0.0 && a <= 1.0)) throw domain_error("hurwitz_combination: shift outside (0,1]");
    regular += weights[r] * detail::hurwitz_regular(s, a, cutoff).regular;
    const double log_base = std::log(cutoff + a);
    if (cancels) {
      // w (N+a)^{1-s}/(s-1) summed with sum w = 0 equals -sum w L expm1_over((1-s)L).
      pole_part -= weights[r] * log_base * detail::expm1_over((1.0 - s) * log_base);
    } else {
      pole_part += weights[r] * std::exp((1.0 - s) * log_base) / (s - 1.0);
    }
  }
  return regular + pole_part;
}

}  // namespace glv
