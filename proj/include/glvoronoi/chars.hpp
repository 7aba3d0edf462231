#pragma once

// Dirichlet characters modulo an odd prime, indexed by an exponent against the
// smallest primitive root, and their Gauss sums.

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "glvoronoi/arith.hpp"

namespace glv {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// Smallest g >= 2 of multiplicative order q-1 modulo the prime q >= 3.
inline std::int64_t find_primitive_root(std::int64_t q) {
  if (q < 3 || !is_prime(q))
    throw domain_error("find_primitive_root: q must be a prime >= 3, got " +
                       std::to_string(q));
  std::vector<std::int64_t> order_primes;
  for (const auto& [p, e] : factorize(q - 1)) order_primes.push_back(p);
  for (std::int64_t g = 2; g < q; ++g) {
    bool generator = true;
    for (std::int64_t p : order_primes) {
      if (pow_mod(g, (q - 1) / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw domain_error("find_primitive_root: no generator found");  // unreachable for primes
}

/// An odd prime modulus with its primitive root, discrete-log table and the
/// root-of-unity tables e(j/q) and e(j/(q-1)).
class PrimeModulus {
 public:
  explicit PrimeModulus(std::int64_t q) : q_(q), g_(find_primitive_root(q)) {
    const auto size = static_cast<std::size_t>(q);
    dlog_.assign(size, -1);
    power_.resize(size - 1);
    std::int64_t x = 1;
    for (std::int64_t j = 0; j < q - 1; ++j) {
      power_[static_cast<std::size_t>(j)] = x;
      if (dlog_[static_cast<std::size_t>(x)] != -1)
        throw domain_error("PrimeModulus: primitive root check failed");
      dlog_[static_cast<std::size_t>(x)] = j;
      x = x * g_ % q;
    }
    e_q_.resize(size);
    for (std::int64_t j = 0; j < q; ++j)
      e_q_[static_cast<std::size_t>(j)] = unit_phase(static_cast<double>(j) / static_cast<double>(q));
    e_phi_.resize(size - 1);
    for (std::int64_t j = 0; j < q - 1; ++j)
      e_phi_[static_cast<std::size_t>(j)] =
          unit_phase(static_cast<double>(j) / static_cast<double>(q - 1));
  }

  [[nodiscard]] std::int64_t value() const noexcept { return q_; }
  [[nodiscard]] std::int64_t root() const noexcept { return g_; }
  [[nodiscard]] std::int64_t order() const noexcept { return q_ - 1; }

  /// Discrete log base root() of a unit m; -1 when q | m.
  [[nodiscard]] std::int64_t dlog(std::int64_t m) const noexcept {
    return dlog_[static_cast<std::size_t>(mod(m, q_))];
  }
  [[nodiscard]] std::int64_t root_power(std::int64_t j) const noexcept {
    return power_[static_cast<std::size_t>(mod(j, q_ - 1))];
  }
  [[nodiscard]] std::int64_t inverse(std::int64_t m) const {
    const std::int64_t j = dlog(m);
    if (j < 0) throw domain_error("PrimeModulus::inverse: q divides argument");
    return root_power(-j);
  }
  /// e(j/q).
  [[nodiscard]] cd additive(std::int64_t j) const noexcept {
    return e_q_[static_cast<std::size_t>(mod(j, q_))];
  }
  /// e(j/(q-1)).
  [[nodiscard]] cd character_root(std::int64_t j) const noexcept {
    return e_phi_[static_cast<std::size_t>(mod(j, q_ - 1))];
  }

 private:
  std::int64_t q_;
  std::int64_t g_;
  std::vector<std::int64_t> dlog_;
  std::vector<std::int64_t> power_;
  std::vector<cd> e_q_;
  std::vector<cd> e_phi_;
};

/// psi(g^j) = e(t j / (q-1)) for the character of index t.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const PrimeModulus> modulus, std::int64_t index)
      : modulus_(std::move(modulus)), index_(index) {
    if (!modulus_) throw domain_error("DirichletCharacter: null modulus");
    if (index < 0 || index >= modulus_->order())
      throw domain_error("DirichletCharacter: index out of range");
  }

  [[nodiscard]] const PrimeModulus& modulus() const noexcept { return *modulus_; }
  [[nodiscard]] const std::shared_ptr<const PrimeModulus>& modulus_ptr() const noexcept {
    return modulus_;
  }
  [[nodiscard]] std::int64_t index() const noexcept { return index_; }
  [[nodiscard]] bool trivial() const noexcept { return index_ == 0; }
  [[nodiscard]] Parity parity() const noexcept {
    return index_ % 2 == 0 ? Parity::even : Parity::odd;
  }
  [[nodiscard]] DirichletCharacter conjugate() const {
    return {modulus_, mod(-index_, modulus_->order())};
  }

  [[nodiscard]] cd operator()(std::int64_t m) const noexcept {
    const std::int64_t j = modulus_->dlog(m);
    if (j < 0) return {0.0, 0.0};
    return modulus_->character_root(index_ * j);
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.index_ == b.index_ && a.modulus_->value() == b.modulus_->value();
  }

 private:
  std::shared_ptr<const PrimeModulus> modulus_;
  std::int64_t index_;
};

inline cd char_eval(const DirichletCharacter& psi, std::int64_t m) { return psi(m); }

/// tau(psi) = sum_{x=1}^{q-1} psi(x) e(x/q).
inline cd gauss_sum(const DirichletCharacter& psi) {
  const PrimeModulus& mod_q = psi.modulus();
  cd sum{0.0, 0.0};
  for (std::int64_t x = 1; x < mod_q.value(); ++x) sum += psi(x) * mod_q.additive(x);
  return sum;
}

inline std::vector<DirichletCharacter> characters_by_parity(
    const std::shared_ptr<const PrimeModulus>& modulus, Parity parity,
    bool nontrivial_only = true) {
  std::vector<DirichletCharacter> out;
  for (std::int64_t t = 0; t < modulus->order(); ++t) {
    if (nontrivial_only && t == 0) continue;
    if ((t % 2 == 0) != (parity == Parity::even)) continue;
    out.emplace_back(modulus, t);
  }
  return out;
}

inline std::shared_ptr<const PrimeModulus> make_modulus(std::int64_t q) {
  return std::make_shared<const PrimeModulus>(q);
}

}  // namespace glv
