#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "glvoronoi/chars.hpp"

using glv::cd;

TEST(PrimitiveRoot, SmallPrimes) {
  EXPECT_EQ(glv::find_primitive_root(3), 2);
  EXPECT_EQ(glv::find_primitive_root(5), 2);
  EXPECT_EQ(glv::find_primitive_root(7), 3);
  EXPECT_EQ(glv::find_primitive_root(23), 5);
}

TEST(PrimitiveRoot, RejectsBadModuli) {
  EXPECT_THROW(glv::find_primitive_root(2), glv::domain_error);
  EXPECT_THROW(glv::find_primitive_root(9), glv::domain_error);
  EXPECT_THROW(glv::find_primitive_root(1), glv::domain_error);
}

TEST(PrimeModulus, PowersAreDistinct) {
  for (std::int64_t q : {3, 5, 7, 11, 13, 47}) {
    const glv::PrimeModulus m(q);
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    for (std::int64_t j = 0; j < q - 1; ++j) {
      const auto x = static_cast<std::size_t>(m.root_power(j));
      EXPECT_FALSE(seen[x]);
      seen[x] = true;
      EXPECT_EQ(m.dlog(static_cast<std::int64_t>(x)), j);
    }
    EXPECT_EQ(m.dlog(0), -1);
  }
}

TEST(CharEval, Examples) {
  auto mod5 = glv::make_modulus(5);
  const glv::DirichletCharacter trivial(mod5, 0);
  EXPECT_NEAR(std::abs(trivial(3) - cd{1.0, 0.0}), 0.0, 1e-15);
  const glv::DirichletCharacter legendre(mod5, 2);
  EXPECT_NEAR(std::abs(legendre(2) - cd{-1.0, 0.0}), 0.0, 1e-15);
  EXPECT_EQ(legendre(5), cd(0.0, 0.0));
  EXPECT_EQ(legendre(-10), cd(0.0, 0.0));
  // Legendre symbol values mod 5: squares 1, 4.
  EXPECT_NEAR(legendre(4).real(), 1.0, 1e-15);
  EXPECT_NEAR(legendre(3).real(), -1.0, 1e-15);
}

TEST(CharEval, ParityMatchesValueAtMinusOne) {
  for (std::int64_t q : {3, 5, 7, 11, 13}) {
    auto m = glv::make_modulus(q);
    for (std::int64_t t = 0; t < q - 1; ++t) {
      const glv::DirichletCharacter psi(m, t);
      const double expected = psi.parity() == glv::Parity::even ? 1.0 : -1.0;
      EXPECT_NEAR(std::abs(psi(-1) - cd{expected, 0.0}), 0.0, 1e-13);
    }
  }
}

TEST(CharEval, MultiplicativeOrthogonalConjugate) {
  for (std::int64_t q : {3, 5, 7, 11, 13, 17}) {
    auto m = glv::make_modulus(q);
    for (std::int64_t t = 0; t < q - 1; ++t) {
      const glv::DirichletCharacter psi(m, t);
      const auto bar = psi.conjugate();
      cd total{0.0, 0.0};
      for (std::int64_t a = 1; a < q; ++a) {
        total += psi(a);
        EXPECT_NEAR(std::abs(bar(a) - std::conj(psi(a))), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(psi(a)), 1.0, 1e-13);
        for (std::int64_t b = 1; b < q; ++b)
          EXPECT_NEAR(std::abs(psi(a * b) - psi(a) * psi(b)), 0.0, 1e-12);
      }
      if (!psi.trivial()) {
        EXPECT_NEAR(std::abs(total), 0.0, 1e-12);
      }
    }
  }
}

TEST(GaussSum, Examples) {
  auto mod5 = glv::make_modulus(5);
  EXPECT_NEAR(std::abs(glv::gauss_sum(glv::DirichletCharacter(mod5, 0)) - cd{-1.0, 0.0}), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(glv::gauss_sum(glv::DirichletCharacter(mod5, 2)) - cd{std::sqrt(5.0), 0.0}),
              0.0, 1e-13);
}

TEST(GaussSum, ModulusAndProductUpTo50) {
  for (std::int64_t q = 3; q <= 50; ++q) {
    if (!glv::is_prime(q)) continue;
    auto m = glv::make_modulus(q);
    for (std::int64_t t = 1; t < q - 1; ++t) {
      const glv::DirichletCharacter psi(m, t);
      const cd tau = glv::gauss_sum(psi);
      EXPECT_NEAR(std::abs(tau), std::sqrt(static_cast<double>(q)), 1e-11);
      const cd product = tau * glv::gauss_sum(psi.conjugate());
      EXPECT_NEAR(std::abs(product - psi(-1) * static_cast<double>(q)), 0.0, 1e-11);
    }
  }
}

TEST(CharactersByParity, Counts) {
  auto count = [](std::int64_t q, glv::Parity p) {
    return glv::characters_by_parity(glv::make_modulus(q), p, true).size();
  };
  EXPECT_EQ(count(5, glv::Parity::even), 1u);
  EXPECT_EQ(count(5, glv::Parity::odd), 2u);
  EXPECT_EQ(count(3, glv::Parity::even), 0u);
  EXPECT_EQ(count(7, glv::Parity::even), 2u);
  EXPECT_EQ(count(7, glv::Parity::odd), 3u);
  EXPECT_EQ(glv::characters_by_parity(glv::make_modulus(7), glv::Parity::even, false).size(), 3u);
}
