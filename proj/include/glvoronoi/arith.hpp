#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "glvoronoi/errors.hpp"

namespace glv {

using cd = std::complex<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Non-negative residue of a modulo m (m > 0).
constexpr std::int64_t mod(std::int64_t a, std::int64_t m) noexcept {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t pow_mod(std::int64_t base, std::int64_t exp,
                               std::int64_t m) noexcept {
  __int128 result = 1;
  __int128 b = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

/// Trial division.
constexpr bool is_prime(std::int64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Inverse of a modulo m via the extended Euclidean algorithm.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod(a, m), r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    old_r = std::exchange(r, old_r - quot * r);
    old_s = std::exchange(s, old_s - quot * s);
  }
  if (old_r != 1) throw domain_error("inverse_mod: argument not invertible");
  return mod(old_s, m);
}

/// Prime factorisation by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw domain_error("factorize: argument must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Exponent of prime p in n (n > 0).
constexpr int valuation(std::int64_t n, std::int64_t p) noexcept {
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

/// Primes up to and including limit (sieve of Eratosthenes).
inline std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i)
      composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

/// e(x) = exp(2 pi i x).
inline cd unit_phase(double x) { return std::polar(1.0, two_pi * x); }

}  // namespace glv
