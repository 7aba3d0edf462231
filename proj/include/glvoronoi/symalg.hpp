#pragma once

// Exact multivariate Laurent polynomials over the rationals, and the Hecke
// Dirichlet polynomials H_l, H~_l written in the formal variables
//   X  = q^{-s},  Q = q,  A_i = A(1,...,1,q,1,...,1) with q at position i from the right.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "glvoronoi/errors.hpp"

namespace glv::sym {

using rational = boost::multiprecision::cpp_rational;

/// Variable ids: 0 is X, 1 is Q, 1+i is A_i.
inline constexpr int var_X = 0;
inline constexpr int var_Q = 1;
constexpr int var_A(int i) noexcept { return 1 + i; }

/// Sorted (variable, exponent) pairs with nonzero exponents.
using Monomial = std::vector<std::pair<int, int>>;

class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const rational& c) { add_term({}, c); }
  LaurentPoly(int c) : LaurentPoly(rational(c)) {}  // NOLINT(google-explicit-constructor)

  static LaurentPoly monomial(const Monomial& m, const rational& c = 1) {
    LaurentPoly p;
    p.add_term(normalise(m), c);
    return p;
  }
  static LaurentPoly variable(int var, int exponent = 1) {
    return monomial({{var, exponent}});
  }
  static LaurentPoly X(int e = 1) { return variable(var_X, e); }
  static LaurentPoly Q(int e = 1) { return variable(var_Q, e); }
  static LaurentPoly A(int i) { return variable(var_A(i), 1); }

  [[nodiscard]] const std::map<Monomial, rational>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(const LaurentPoly& a) { return LaurentPoly{} - a; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

  /// Replace every variable by the Laurent polynomial image(var)^exponent.
  /// image must return an invertible monomial for negative exponents.
  template <class Image>
  [[nodiscard]] LaurentPoly substitute(Image&& image) const {
    LaurentPoly out;
    for (const auto& [m, c] : terms_) {
      LaurentPoly term{c};
      for (const auto& [var, e] : m) term *= image(var, e);
      out += term;
    }
    return out;
  }

  /// Numerical value with X, Q and A_1.. given; values[v] is the value of variable v.
  [[nodiscard]] double evaluate(std::span<const double> values) const {
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = c.convert_to<double>();
      for (const auto& [var, e] : m) {
        if (static_cast<std::size_t>(var) >= values.size())
          throw domain_error("LaurentPoly::evaluate: no value for variable " + std::to_string(var));
        t *= std::pow(values[static_cast<std::size_t>(var)], e);
      }
      total += t;
    }
    return total;
  }

  [[nodiscard]] std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      const rational mag = c < 0 ? rational(-c) : c;
      const bool unit = mag == 1;
      if (!unit || m.empty()) os << mag;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (!unit || j > 0) os << "*";
        os << variable_name(m[j].first);
        if (m[j].second != 1) os << "^" << m[j].second;
      }
    }
    return os.str();
  }

  static std::string variable_name(int var) {
    if (var == var_X) return "X";
    if (var == var_Q) return "Q";
    return "A" + std::to_string(var - 1);
  }

 private:
  static Monomial normalise(Monomial m) {
    std::sort(m.begin(), m.end());
    Monomial out;
    for (const auto& [v, e] : m) {
      if (!out.empty() && out.back().first == v) out.back().second += e;
      else out.emplace_back(v, e);
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
    return out;
  }

  static Monomial multiply(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.push_back(b[j++]);
      } else {
        const int e = a[i].second + b[j].second;
        if (e != 0) out.emplace_back(a[i].first, e);
        ++i;
        ++j;
      }
    }
    return out;
  }

  void add_term(const Monomial& m, const rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Monomial, rational> terms_;
};

namespace detail {
inline void check_l(int n, int l, const char* who) {
  if (n < 2) throw domain_error(std::string(who) + ": n must be >= 2");
  if (l < 1 || l > n - 1)
    throw domain_error(std::string(who) + ": l must satisfy 1 <= l <= n-1");
}
inline int sign(int e) { return e % 2 == 0 ? 1 : -1; }
}  // namespace detail

/// H_l = sum_{i=l}^{n-1} (-1)^i A_i X^i + (-1)^n X^n.
inline LaurentPoly build_H(int n, int l) {
  detail::check_l(n, l, "build_H");
  LaurentPoly h;
  for (int i = l; i <= n - 1; ++i) h += LaurentPoly(detail::sign(i)) * LaurentPoly::A(i) * LaurentPoly::X(i);
  h += LaurentPoly(detail::sign(n)) * LaurentPoly::X(n);
  return h;
}

/// H~_l: the q sits at position i from the left, which is position n-i from the right.
inline LaurentPoly build_H_tilde(int n, int l) {
  detail::check_l(n, l, "build_H_tilde");
  LaurentPoly h;
  for (int i = l; i <= n - 1; ++i)
    h += LaurentPoly(detail::sign(i)) * LaurentPoly::A(n - i) * LaurentPoly::X(i);
  h += LaurentPoly(detail::sign(n)) * LaurentPoly::X(n);
  return h;
}

/// X -> Q^{-1} X^{-1}, the effect of s -> 1-s on q^{-s}.
inline LaurentPoly substitute_dual(const LaurentPoly& p) {
  return p.substitute([](int var, int e) {
    if (var == var_X) return LaurentPoly::monomial({{var_Q, -e}, {var_X, -e}});
    return LaurentPoly::variable(var, e);
  });
}

/// 1/Q + H_1 + sum_{l=2}^{k} (Q^{l-1} - Q^{l-2}) H_l, with H built by make_h.
template <class MakeH>
LaurentPoly hecke_combination(int n, int k, MakeH&& make_h) {
  LaurentPoly p = LaurentPoly::Q(-1) + make_h(n, 1);
  for (int l = 2; l <= k; ++l) p += (LaurentPoly::Q(l - 1) - LaurentPoly::Q(l - 2)) * make_h(n, l);
  return p;
}

inline void check_k(int n, int k, const char* who) {
  if (n < 2) throw domain_error(std::string(who) + ": n must be >= 2");
  if (k < 1 || k > n - 1) throw domain_error(std::string(who) + ": k must satisfy 1 <= k <= n-1");
}

inline LaurentPoly dual_hecke_lhs(int n, int k) {
  check_k(n, k, "dual_hecke_lhs");
  return hecke_combination(n, k, build_H);
}

inline LaurentPoly dual_hecke_rhs(int n, int k) {
  check_k(n, k, "dual_hecke_rhs");
  const LaurentPoly inner = substitute_dual(hecke_combination(n, n - k, build_H_tilde));
  return LaurentPoly(detail::sign(n)) * LaurentPoly::Q(k) * LaurentPoly::X(n) * inner;
}

/// 1/Q + sum_i (-1)^i Q^{min(i,k)-1} A_i X^i + (-1)^n Q^{k-1} X^n, built directly.
inline LaurentPoly dual_hecke_lhs_closed_form(int n, int k) {
  check_k(n, k, "dual_hecke_lhs_closed_form");
  LaurentPoly p = LaurentPoly::Q(-1);
  for (int i = 1; i <= n - 1; ++i)
    p += LaurentPoly(detail::sign(i)) * LaurentPoly::Q(std::min(i, k) - 1) * LaurentPoly::A(i) *
         LaurentPoly::X(i);
  p += LaurentPoly(detail::sign(n)) * LaurentPoly::Q(k - 1) * LaurentPoly::X(n);
  return p;
}

struct DualHeckeResult {
  bool holds;
  LaurentPoly residual;
};

inline DualHeckeResult check_dual_hecke(int n, int k) {
  LaurentPoly residual = dual_hecke_lhs(n, k) - dual_hecke_rhs(n, k);
  const bool holds = residual.is_zero();
  return {holds, std::move(residual)};
}

}  // namespace glv::sym
