#pragma once

// Hyper-Kloosterman sums Kl_k(m, q) for prime q: direct enumeration over
// (k-1)-tuples of units, and the independent route through Gauss-sum moments
// over even and odd characters.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "glvoronoi/chars.hpp"

namespace glv {

struct KloostermanParams {
  int k = 1;
  std::int64_t m = 0;
  std::int64_t q = 3;
};

inline constexpr double default_kl_budget = 1e8;

/// Kl_k(m,q) = sum over units x_1..x_{k-1} of e((x_1+...+x_{k-1} + m/(x_1...x_{k-1}))/q).
///
/// Tuples are enumerated with an odometer; the exponent residues are counted
/// in integers and combined with the e(j/q) table once at the end, so the
/// result does not depend on enumeration order.
inline cd kl_direct(int k, std::int64_t m, const PrimeModulus& modulus,
                    double budget = default_kl_budget) {
  if (k < 1) throw domain_error("kl_direct: k must be >= 1");
  const std::int64_t q = modulus.value();
  if (k == 1) return modulus.additive(m);
  const int dims = k - 1;
  if (std::pow(static_cast<double>(q), dims) > budget)
    throw budget_exceeded("kl_direct: q^(k-1) = " +
                          std::to_string(std::pow(static_cast<double>(q), dims)) +
                          " exceeds the enumeration budget; use kl_via_chars");
  const std::int64_t m_res = mod(m, q);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(q), 0);
  // Partial sums and products along the odometer, so each step is O(1) amortised.
  std::vector<std::int64_t> x(static_cast<std::size_t>(dims), 1);
  std::vector<std::int64_t> sum_prefix(static_cast<std::size_t>(dims) + 1, 0);
  std::vector<std::int64_t> prod_prefix(static_cast<std::size_t>(dims) + 1, 1);
  for (int i = 0; i < dims; ++i) {
    sum_prefix[static_cast<std::size_t>(i) + 1] = sum_prefix[static_cast<std::size_t>(i)] + 1;
    prod_prefix[static_cast<std::size_t>(i) + 1] = 1;
  }
  while (true) {
    const std::int64_t s = sum_prefix[static_cast<std::size_t>(dims)];
    const std::int64_t p = prod_prefix[static_cast<std::size_t>(dims)];
    ++counts[static_cast<std::size_t>(mod(s + m_res * modulus.inverse(p), q))];
    int pos = dims - 1;
    while (pos >= 0 && x[static_cast<std::size_t>(pos)] == q - 1) {
      x[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++x[static_cast<std::size_t>(pos)];
    for (int i = pos; i < dims; ++i) {
      const auto u = static_cast<std::size_t>(i);
      sum_prefix[u + 1] = (sum_prefix[u] + x[u]) % q;
      prod_prefix[u + 1] = prod_prefix[u] * x[u] % q;
    }
  }
  cd total{0.0, 0.0};
  for (std::int64_t r = 0; r < q; ++r)
    total += static_cast<double>(counts[static_cast<std::size_t>(r)]) * modulus.additive(r);
  return total;
}

inline cd kl_direct(const KloostermanParams& p, double budget = default_kl_budget) {
  const PrimeModulus modulus(p.q);
  return kl_direct(p.k, p.m, modulus, budget);
}

/// sum over nontrivial psi of the given parity of tau(psi)^k * conj(psi)(m).
inline cd char_moment(const std::shared_ptr<const PrimeModulus>& modulus, int k,
                      std::int64_t m, Parity parity) {
  cd total{0.0, 0.0};
  for (const auto& psi : characters_by_parity(modulus, parity, true))
    total += std::pow(gauss_sum(psi), k) * std::conj(psi(m));
  return total;
}

/// Kl_k(m,q) recovered from the even and odd Gauss-sum moments; requires (m,q)=1.
inline cd kl_via_chars(int k, std::int64_t m,
                       const std::shared_ptr<const PrimeModulus>& modulus) {
  if (k < 1) throw domain_error("kl_via_chars: k must be >= 1");
  const std::int64_t q = modulus->value();
  if (mod(m, q) == 0)
    throw domain_error("kl_via_chars: requires (m,q)=1; the moment identity holds on units only");
  const double trivial = (k % 2 == 0) ? 1.0 : -1.0;  // tau(trivial)^k = (-1)^k
  return (char_moment(modulus, k, m, Parity::even) + char_moment(modulus, k, m, Parity::odd) +
          trivial) /
         static_cast<double>(q - 1);
}

inline cd kl_via_chars(const KloostermanParams& p) {
  return kl_via_chars(p.k, p.m, make_modulus(p.q));
}

/// Kl_k(r, q) for every residue r = 0..q-1.
inline std::vector<cd> kl_table(int k, const PrimeModulus& modulus) {
  std::vector<cd> table(static_cast<std::size_t>(modulus.value()));
  for (std::int64_t r = 0; r < modulus.value(); ++r)
    table[static_cast<std::size_t>(r)] = kl_direct(k, r, modulus);
  return table;
}

}  // namespace glv
