#pragma once

// Dirichlet L-functions, the standard and twisted L-functions of the Eisenstein
// source, the character combinations Z, Z~, Y, Y~ (by continuation and by their
// Kloosterman-weighted Dirichlet series), and functional-equation residuals.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glvoronoi/chars.hpp"
#include "glvoronoi/coeffs.hpp"
#include "glvoronoi/gamma_factors.hpp"
#include "glvoronoi/kloosterman.hpp"
#include "glvoronoi/special.hpp"

namespace glv {

enum class EvalMethod { series, continuation };

inline const char* to_string(EvalMethod m) { return m == EvalMethod::series ? "series" : "continuation"; }

struct LPoint {
  cd s;
  cd value;
  EvalMethod method;
  std::int64_t terms = 0;       // series only
  double tail_estimate = 0.0;   // series only
};

inline cd dirichlet_L(cd s, const DirichletCharacter& psi) {
  const PrimeModulus& m = psi.modulus();
  const auto q = static_cast<double>(m.value());
  if (psi.trivial()) return (1.0 - std::exp(-s * std::log(q))) * riemann_zeta(s);
  std::vector<cd> w;
  std::vector<double> a;
  for (std::int64_t r = 1; r < m.value(); ++r) {
    w.push_back(psi(r));
    a.push_back(static_cast<double>(r) / q);
  }
  return std::exp(-s * std::log(q)) * hurwitz_combination(s, w, a);
}

namespace detail {
inline void check_poles(cd s, const EisensteinParams& p, const char* who) {
  std::string bad;
  for (std::size_t j = 0; j < p.alpha.size(); ++j)
    if (std::abs(s - 1.0 - p.alpha[j]) < pole_tolerance) bad += (bad.empty() ? "" : ",") + std::to_string(j + 1);
  if (!bad.empty())
    throw pole_error(std::string(who) + ": s is a pole 1+alpha_j for j = " + bad);
}
}  // namespace detail

/// prod_j zeta(s - alpha_j).
inline cd eis_L(cd s, const EisensteinParams& p) {
  detail::check_poles(s, p, "eis_L");
  cd v{1.0, 0.0};
  for (const cd& a : p.alpha) v *= riemann_zeta(s - a);
  return v;
}

/// prod_j L(s - alpha_j, psi).
inline cd eis_L_twisted(cd s, const EisensteinParams& p, const DirichletCharacter& psi) {
  if (psi.trivial()) detail::check_poles(s, p, "eis_L_twisted");
  cd v{1.0, 0.0};
  for (const cd& a : p.alpha) v *= dirichlet_L(s - a, psi);
  return v;
}

/// H_l(s, q) = sum_{i=l}^{n-1} (-1)^i A(q@i from the right) q^{-is} + (-1)^n q^{-ns}.
inline cd hecke_H(const CoefficientSource& src, cd s, std::int64_t q, int l) {
  const int n = src.degree();
  if (l < 1 || l > n - 1) throw domain_error("hecke_H: l must satisfy 1 <= l <= n-1");
  const cd X = std::exp(-s * std::log(static_cast<double>(q)));
  cd total{0.0, 0.0};
  cd Xi = std::pow(X, l);
  for (int i = l; i <= n - 1; ++i, Xi *= X) total += (i % 2 == 0 ? 1.0 : -1.0) * src(q_from_right(n, i, q)) * Xi;
  return total + (n % 2 == 0 ? 1.0 : -1.0) * std::pow(X, n);
}

/// H~_l(s, q): as H_l with q at position i from the left.
inline cd hecke_H_tilde(const CoefficientSource& src, cd s, std::int64_t q, int l) {
  const int n = src.degree();
  if (l < 1 || l > n - 1) throw domain_error("hecke_H_tilde: l must satisfy 1 <= l <= n-1");
  const cd X = std::exp(-s * std::log(static_cast<double>(q)));
  cd total{0.0, 0.0};
  cd Xi = std::pow(X, l);
  for (int i = l; i <= n - 1; ++i, Xi *= X) total += (i % 2 == 0 ? 1.0 : -1.0) * src(q_from_left(n, i, q)) * Xi;
  return total + (n % 2 == 0 ? 1.0 : -1.0) * std::pow(X, n);
}

/// L_q(s, pi) = sum_{q|m} A(1,...,1,m) m^{-s} = -L(s, pi) H_1(s, q).
inline cd L_q_value(cd s, const EisensteinParams& p, std::int64_t q) {
  const EisensteinSource src(p);
  return -eis_L(s, p) * hecke_H(src, s, q, 1);
}

/// L_q(s, pi~) = sum_{q|m} A(m,1,...,1) m^{-s} = -L(s, pi~) H~_1(s, q).
inline cd L_q_dual_value(cd s, const EisensteinParams& p, std::int64_t q) {
  const EisensteinSource src(p);
  return -eis_L(s, p.dual()) * hecke_H_tilde(src, s, q, 1);
}

// ---------------------------------------------------------------------------
// Z, Z~, Y, Y~.

enum class Combination { Z, Z_tilde, Y, Y_tilde };

inline const char* to_string(Combination c) {
  switch (c) {
    case Combination::Z: return "Z";
    case Combination::Z_tilde: return "Z~";
    case Combination::Y: return "Y";
    case Combination::Y_tilde: return "Y~";
  }
  return "?";
}

struct ZParams {
  std::int64_t q = 3;
  std::int64_t a = 1;
  int k = 1;
};

namespace detail {

inline bool is_dual(Combination c) { return c == Combination::Z_tilde || c == Combination::Y_tilde; }
inline bool is_even(Combination c) { return c == Combination::Z || c == Combination::Z_tilde; }

inline void check_zparams(const ZParams& z, int n) {
  if (!is_prime(z.q) || z.q < 3) throw domain_error("q must be an odd prime");
  if (mod(z.a, z.q) == 0) throw domain_error("a must be coprime to q");
  if (z.k < 1 || z.k > n - 1) throw domain_error("k must satisfy 1 <= k <= n-1");
}

/// Weight of A m^{-s} in the Kloosterman form, as a function of m mod q.
inline std::vector<cd> kl_residue_weights(Combination c, const ZParams& z, int n) {
  const PrimeModulus modulus(z.q);
  const bool dual = is_dual(c);
  const int kk = dual ? n - z.k : z.k;
  const std::int64_t mult = dual ? inverse_mod(z.a, z.q) : z.a;
  const auto table = kl_table(kk, modulus);
  const double half = static_cast<double>(z.q - 1) / 2.0;
  const double sign = is_even(c) ? 1.0 : -1.0;
  std::vector<cd> w(static_cast<std::size_t>(z.q));
  for (std::int64_t r = 0; r < z.q; ++r)
    w[static_cast<std::size_t>(r)] = half * (table[static_cast<std::size_t>(mod(mult * r, z.q))] +
                                             sign * table[static_cast<std::size_t>(mod(-mult * r, z.q))]);
  return w;
}

inline double series_tail_estimate(std::int64_t M, double sigma, int n) {
  double f = 1.0;
  for (int j = 2; j <= n - 1; ++j) f *= j;
  const double lm = std::log(static_cast<double>(M)) + n;
  return std::pow(static_cast<double>(M), 1.0 - sigma) * std::pow(lm, n - 1) / (f * (sigma - 1.0));
}

}  // namespace detail

inline constexpr std::int64_t default_series_cap = std::int64_t{1} << 22;

/// Dirichlet series sum_m w(m mod q) A_side(m) m^{-s}, where A_side(m) is
/// A(1,...,1,m) or, for the dual side, A(m,1,...,1). Truncated once the tail
/// estimate (scaled by max |w|) falls below tol or at cap terms.
inline LPoint weighted_series(const CoefficientSource& src, bool dual_side, cd s,
                              const std::vector<cd>& weights, double tol = 1e-13,
                              std::int64_t cap = default_series_cap) {
  const int n = src.degree();
  if (s.real() <= 1.0) throw domain_error("weighted_series: needs Re s > 1 for absolute convergence");
  double wmax = 0.0;
  for (const cd& w : weights) wmax = std::max(wmax, std::abs(w));
  const auto q = static_cast<std::int64_t>(weights.size());
  std::int64_t M = 1024;
  while (M < cap && wmax * detail::series_tail_estimate(M, s.real(), n) > tol) M *= 2;
  M = std::min(M, cap);
  cd total{0.0, 0.0};
  const auto* eis = dynamic_cast<const EisensteinSource*>(&src);
  if (eis) {
    const EisensteinParams p = dual_side ? eis->params().dual() : eis->params();
    const PrimeToQSieve sieve(p, 0, M);
    PrimeToQSieve::Segment seg;
    constexpr std::int64_t block = 1 << 16;
    for (std::int64_t lo = 1; lo <= M; lo += block) {
      const std::int64_t hi = std::min(M + 1, lo + block);
      sieve.fill(lo, hi, seg);
      for (std::int64_t m = lo; m < hi; ++m) {
        const cd w = weights[static_cast<std::size_t>(m % q)];
        if (w == cd{0.0, 0.0}) continue;
        total += w * seg.value[static_cast<std::size_t>(m - lo)] * std::exp(-s * std::log(static_cast<double>(m)));
      }
    }
  } else {
    for (std::int64_t m = 1; m <= M; ++m) {
      const cd w = weights[static_cast<std::size_t>(m % q)];
      if (w == cd{0.0, 0.0}) continue;
      const Tuple t = dual_side ? first_slot(n, m) : last_slot(n, m);
      total += w * src(t) * std::exp(-s * std::log(static_cast<double>(m)));
    }
  }
  return {s, total, EvalMethod::series, M, wmax * detail::series_tail_estimate(M, s.real(), n)};
}

/// The combination by its Kloosterman-weighted Dirichlet series (any source, Re s > 1).
inline LPoint assemble_series(Combination c, cd s, const ZParams& z, const CoefficientSource& src,
                              double tol = 1e-13, std::int64_t cap = default_series_cap) {
  detail::check_zparams(z, src.degree());
  return weighted_series(src, detail::is_dual(c), s, detail::kl_residue_weights(c, z, src.degree()), tol, cap);
}

/// The combination from its character-sum definition with continued L-values.
inline LPoint assemble_continuation(Combination c, cd s, const ZParams& z, const EisensteinParams& p) {
  const int n = p.degree();
  detail::check_zparams(z, n);
  auto modulus = make_modulus(z.q);
  const bool dual = detail::is_dual(c);
  const Parity parity = detail::is_even(c) ? Parity::even : Parity::odd;
  const int kk = dual ? n - z.k : z.k;
  cd total{0.0, 0.0};
  for (const auto& psi : characters_by_parity(modulus, parity, true)) {
    if (!dual) {
      // tau(psibar)^k psi(a) L(s, pi x psi)
      total += std::pow(gauss_sum(psi.conjugate()), kk) * psi(z.a) * eis_L_twisted(s, p, psi);
    } else {
      // tau(psi)^{n-k} psi(a) L(s, pi~ x psibar)
      total += std::pow(gauss_sum(psi), kk) * psi(z.a) * eis_L_twisted(s, p.dual(), psi.conjugate());
    }
  }
  if (detail::is_even(c)) {
    const double sign = kk % 2 == 0 ? 1.0 : -1.0;
    const auto q = static_cast<double>(z.q);
    if (!dual) total += sign * (eis_L(s, p) - q * L_q_value(s, p, z.q));
    else total += sign * (eis_L(s, p.dual()) - q * L_q_dual_value(s, p, z.q));
  }
  return {s, total, EvalMethod::continuation};
}

inline cd assemble_Z(cd s, const ZParams& z, const EisensteinParams& p) {
  return assemble_continuation(Combination::Z, s, z, p).value;
}
inline cd assemble_Z_tilde(cd s, const ZParams& z, const EisensteinParams& p) {
  return assemble_continuation(Combination::Z_tilde, s, z, p).value;
}
inline cd assemble_Y(cd s, const ZParams& z, const EisensteinParams& p) {
  return assemble_continuation(Combination::Y, s, z, p).value;
}
inline cd assemble_Y_tilde(cd s, const ZParams& z, const EisensteinParams& p) {
  return assemble_continuation(Combination::Y_tilde, s, z, p).value;
}

// ---------------------------------------------------------------------------
// Functional-equation residuals.

inline double relative_residual(cd lhs, cd rhs) {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

enum class FeKind { standard, even, odd };

inline const char* to_string(FeKind k) {
  switch (k) {
    case FeKind::standard: return "standard";
    case FeKind::even: return "even";
    case FeKind::odd: return "odd";
  }
  return "?";
}

struct FeResidual {
  double residual = 0.0;   // max over the characters checked
  int characters = 0;      // how many twists entered (0 when the family is empty)
  cd lhs, rhs;             // at the worst character
};

/// Residual of
///   standard: L(s,pi) = G_+(s) L(1-s,pi~)
///   even:     tau(psibar)^k L(s,pi x psi) = tau(psi)^{n-k} q^{k-ns} G_+(s) L(1-s,pi~ x psibar)
///   odd:      tau(psibar)^k L(s,pi x psi) = (-1)^k tau(psi)^{n-k} q^{k-ns} G_-(s) L(1-s,pi~ x psibar)
/// over all nontrivial psi of the parity. as_printed drops the (-1)^k of the odd form.
inline FeResidual fe_residual(FeKind kind, cd s, const ZParams& z, const EisensteinParams& p,
                              bool as_printed = false) {
  const int n = p.degree();
  FeResidual out;
  if (kind == FeKind::standard) {
    out.lhs = eis_L(s, p);
    out.rhs = G_plus(s, p.alpha) * eis_L(1.0 - s, p.dual());
    out.residual = relative_residual(out.lhs, out.rhs);
    out.characters = 0;
    return out;
  }
  detail::check_zparams(z, n);
  auto modulus = make_modulus(z.q);
  const Parity parity = kind == FeKind::even ? Parity::even : Parity::odd;
  const cd qfactor = std::exp((static_cast<double>(z.k) - static_cast<double>(n) * s) *
                              std::log(static_cast<double>(z.q)));
  const cd gamma = kind == FeKind::even ? G_plus(s, p.alpha) : G_minus(s, p.alpha);
  const double sign = (kind == FeKind::odd && !as_printed && z.k % 2 == 1) ? -1.0 : 1.0;
  for (const auto& psi : characters_by_parity(modulus, parity, true)) {
    const cd lhs = std::pow(gauss_sum(psi.conjugate()), z.k) * eis_L_twisted(s, p, psi);
    const cd rhs = sign * std::pow(gauss_sum(psi), n - z.k) * qfactor * gamma *
                   eis_L_twisted(1.0 - s, p.dual(), psi.conjugate());
    const double r = relative_residual(lhs, rhs);
    if (out.characters == 0 || r > out.residual) {
      out.residual = r;
      out.lhs = lhs;
      out.rhs = rhs;
    }
    ++out.characters;
  }
  return out;
}

/// Residual of the twisted equation before the tau(psibar)^k rewriting:
/// L(s, pi x psi) = tau(psi)^n q^{-ns} G_+-(s) L(1-s, pi~ x psibar).
inline FeResidual fe_residual_unrewritten(Parity parity, cd s, std::int64_t q, const EisensteinParams& p) {
  const int n = p.degree();
  auto modulus = make_modulus(q);
  const cd qfactor = std::exp(-static_cast<double>(n) * s * std::log(static_cast<double>(q)));
  const cd gamma = parity == Parity::even ? G_plus(s, p.alpha) : G_minus(s, p.alpha);
  FeResidual out;
  for (const auto& psi : characters_by_parity(modulus, parity, true)) {
    const cd lhs = eis_L_twisted(s, p, psi);
    const cd rhs = std::pow(gauss_sum(psi), n) * qfactor * gamma * eis_L_twisted(1.0 - s, p.dual(), psi.conjugate());
    const double r = relative_residual(lhs, rhs);
    if (out.characters == 0 || r > out.residual) {
      out.residual = r;
      out.lhs = lhs;
      out.rhs = rhs;
    }
    ++out.characters;
  }
  return out;
}

/// 1/q + H_1 + sum_{l=2}^{k} (q^{l-1} - q^{l-2}) H_l, the polynomial multiplying
/// (-1)^k q L(s, pi) in the even-part identity.
inline cd hecke_combination_value(const CoefficientSource& src, cd s, std::int64_t q, int k, bool tilde) {
  const auto qd = static_cast<double>(q);
  cd total = 1.0 / qd + (tilde ? hecke_H_tilde(src, s, q, 1) : hecke_H(src, s, q, 1));
  for (int l = 2; l <= k; ++l)
    total += (std::pow(qd, l - 1) - std::pow(qd, l - 2)) * (tilde ? hecke_H_tilde(src, s, q, l) : hecke_H(src, s, q, l));
  return total;
}

/// Z(s) + (-1)^k q sum_{l=2}^{k} (q^{l-1}-q^{l-2}) H_l(s) L(s, pi).
inline cd even_left_function(cd s, const ZParams& z, const EisensteinParams& p) {
  const EisensteinSource src(p);
  const auto qd = static_cast<double>(z.q);
  cd extra{0.0, 0.0};
  for (int l = 2; l <= z.k; ++l) extra += (std::pow(qd, l - 1) - std::pow(qd, l - 2)) * hecke_H(src, s, z.q, l);
  const double sign = z.k % 2 == 0 ? 1.0 : -1.0;
  cd value = assemble_Z(s, z, p);
  if (z.k >= 2) value += sign * qd * extra * eis_L(s, p);
  return value;
}

/// Z~(s) + (-1)^{n-k} q sum_{l=2}^{n-k} (q^{l-1}-q^{l-2}) H~_l(s) L(s, pi~).
inline cd even_right_function(cd s, const ZParams& z, const EisensteinParams& p) {
  const EisensteinSource src(p);
  const int n = p.degree();
  const auto qd = static_cast<double>(z.q);
  cd extra{0.0, 0.0};
  for (int l = 2; l <= n - z.k; ++l)
    extra += (std::pow(qd, l - 1) - std::pow(qd, l - 2)) * hecke_H_tilde(src, s, z.q, l);
  const double sign = (n - z.k) % 2 == 0 ? 1.0 : -1.0;
  cd value = assemble_Z_tilde(s, z, p);
  if (n - z.k >= 2) value += sign * qd * extra * eis_L(s, p.dual());
  return value;
}

struct ProofChainResidual {
  double even = 0.0;
  double odd = 0.0;
  cd even_lhs, even_rhs, odd_lhs, odd_rhs;
};

/// The pre-inversion identities behind both summation formulae:
///   even: F(s) = q^{k-ns} G_+(s) F~(1-s) with F, F~ the two functions above;
///   odd:  Y(s) = (-1)^k q^{k-ns} G_-(s) Y~(1-s).
inline ProofChainResidual proof_chain_residual(cd s, const ZParams& z, const EisensteinParams& p) {
  const int n = p.degree();
  detail::check_zparams(z, n);
  const cd qfactor = std::exp((static_cast<double>(z.k) - static_cast<double>(n) * s) *
                              std::log(static_cast<double>(z.q)));
  ProofChainResidual out;
  out.even_lhs = even_left_function(s, z, p);
  out.even_rhs = qfactor * G_plus(s, p.alpha) * even_right_function(1.0 - s, z, p);
  out.even = relative_residual(out.even_lhs, out.even_rhs);
  const double sign = z.k % 2 == 0 ? 1.0 : -1.0;
  out.odd_lhs = assemble_Y(s, z, p);
  out.odd_rhs = sign * qfactor * G_minus(s, p.alpha) * assemble_Y_tilde(1.0 - s, z, p);
  out.odd = relative_residual(out.odd_lhs, out.odd_rhs);
  return out;
}

}  // namespace glv
