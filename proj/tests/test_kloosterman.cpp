#include <gtest/gtest.h>

#include <cmath>

#include "glvoronoi/kloosterman.hpp"

using glv::cd;

TEST(KlDirect, KEqualsOneIsAdditiveCharacter) {
  const glv::PrimeModulus m(5);
  for (std::int64_t x = -3; x < 12; ++x)
    EXPECT_NEAR(std::abs(glv::kl_direct(1, x, m) - glv::unit_phase(static_cast<double>(x) / 5.0)), 0.0,
                1e-14);
}

TEST(KlDirect, ClassicalValue) {
  // x = 2, 3 contribute 1 each and x = 1, 4 give 2 cos(4 pi/5), so the value is (3 - sqrt 5)/2.
  const cd v = glv::kl_direct({2, 1, 5});
  EXPECT_NEAR(v.real(), 0.3819660113, 1e-10);
  EXPECT_NEAR(v.imag(), 0.0, 1e-14);
}

TEST(KlDirect, DegenerateValue) {
  for (std::int64_t q : {3, 5, 7, 11}) {
    const glv::PrimeModulus m(q);
    for (int k = 1; k <= 5; ++k) {
      const double expected = (k % 2 == 1) ? 1.0 : -1.0;
      for (std::int64_t mult : {0, 1, 3}) {
        const cd v = glv::kl_direct(k, mult * q, m);
        EXPECT_NEAR(std::abs(v - cd{expected, 0.0}), 0.0, 1e-9) << "q=" << q << " k=" << k;
      }
    }
  }
}

TEST(KlDirect, BudgetRefusal) {
  const glv::PrimeModulus m(13);
  EXPECT_THROW(glv::kl_direct(5, 1, m, 1000.0), glv::budget_exceeded);
  EXPECT_THROW(glv::kl_direct(0, 1, m), glv::domain_error);
}

TEST(KlViaChars, MatchesDirectOnGrid) {
  for (std::int64_t q : {3, 5, 7, 11, 13}) {
    auto mod = glv::make_modulus(q);
    for (int k = 1; k <= 5; ++k)
      for (std::int64_t x = 1; x < q; ++x) {
        const cd d = glv::kl_direct(k, x, *mod);
        const cd c = glv::kl_via_chars(k, x, mod);
        EXPECT_NEAR(std::abs(d - c), 0.0, 1e-10) << "q=" << q << " k=" << k << " m=" << x;
      }
  }
}

TEST(KlViaChars, Examples) {
  EXPECT_NEAR(glv::kl_via_chars({2, 1, 5}).real(), 0.3819660113, 1e-10);
  EXPECT_NEAR(std::abs(glv::kl_via_chars({3, 2, 7}) - glv::kl_direct({3, 2, 7})), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(glv::kl_via_chars({1, 1, 5}) - glv::unit_phase(0.2)), 0.0, 1e-13);
  EXPECT_THROW(glv::kl_via_chars({2, 10, 5}), glv::domain_error);
}

TEST(CharMoment, EvenAndOddIdentities) {
  for (std::int64_t q : {3, 5, 7, 11, 13}) {
    auto mod = glv::make_modulus(q);
    const double half = static_cast<double>(q - 1) / 2.0;
    for (int k = 1; k <= 5; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      for (std::int64_t x = 0; x < q; ++x) {
        const cd even = glv::char_moment(mod, k, x, glv::Parity::even);
        const cd odd = glv::char_moment(mod, k, x, glv::Parity::odd);
        if (x == 0) {
          EXPECT_NEAR(std::abs(even), 0.0, 1e-10);
          EXPECT_NEAR(std::abs(odd), 0.0, 1e-10);
          continue;
        }
        const cd plus = glv::kl_direct(k, x, *mod);
        const cd minus = glv::kl_direct(k, -x, *mod);
        EXPECT_NEAR(std::abs(even - (half * (plus + minus) - sign)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(odd - half * (plus - minus)), 0.0, 1e-10);
      }
    }
  }
}

TEST(KlProperties, ConjugationLawAndWeilSize) {
  for (std::int64_t q : {5, 7, 11}) {
    const glv::PrimeModulus m(q);
    for (int k = 1; k <= 4; ++k)
      for (std::int64_t x = 1; x < q; ++x) {
        const cd v = glv::kl_direct(k, x, m);
        const std::int64_t flipped = (k % 2 == 0) ? x : -x;
        EXPECT_NEAR(std::abs(std::conj(v) - glv::kl_direct(k, flipped, m)), 0.0, 1e-10);
        if (k % 2 == 0) {
          EXPECT_NEAR(v.imag(), 0.0, 1e-10);
        }
        EXPECT_LE(std::abs(v), k * std::pow(static_cast<double>(q), (k - 1) / 2.0) + 1e-9);
      }
  }
}

TEST(KlTable, MatchesPointwise) {
  const glv::PrimeModulus m(7);
  const auto table = glv::kl_table(3, m);
  ASSERT_EQ(table.size(), 7u);
  for (std::int64_t r = 0; r < 7; ++r)
    EXPECT_EQ(table[static_cast<std::size_t>(r)], glv::kl_direct(3, r, m));
}
