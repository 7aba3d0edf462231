#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "glvoronoi/symalg.hpp"

using glv::sym::LaurentPoly;

namespace {
LaurentPoly A(int i) { return LaurentPoly::A(i); }
LaurentPoly X(int e) { return LaurentPoly::X(e); }
LaurentPoly Q(int e) { return LaurentPoly::Q(e); }
}  // namespace

TEST(LaurentPoly, ZeroTermsAreDropped) {
  const LaurentPoly p = X(1) + A(1) - X(1);
  EXPECT_EQ(p, A(1));
  EXPECT_TRUE((X(2) * X(-2) - LaurentPoly(1)).is_zero());
  EXPECT_EQ(LaurentPoly(0).size(), 0u);
}

TEST(BuildH, Examples) {
  EXPECT_EQ(glv::sym::build_H(2, 1), -A(1) * X(1) + X(2));
  EXPECT_EQ(glv::sym::build_H(3, 2), A(2) * X(2) - X(3));
  EXPECT_EQ(glv::sym::build_H(4, 1), -A(1) * X(1) + A(2) * X(2) - A(3) * X(3) + X(4));
  EXPECT_THROW(glv::sym::build_H(3, 0), glv::domain_error);
  EXPECT_THROW(glv::sym::build_H(3, 3), glv::domain_error);
}

TEST(BuildHTilde, Examples) {
  EXPECT_EQ(glv::sym::build_H_tilde(3, 1), -A(2) * X(1) + A(1) * X(2) - X(3));
  EXPECT_EQ(glv::sym::build_H_tilde(2, 1), -A(1) * X(1) + X(2));
  EXPECT_EQ(glv::sym::build_H_tilde(4, 2), A(2) * X(2) - A(1) * X(3) + X(4));
}

TEST(SubstituteDual, Examples) {
  EXPECT_EQ(glv::sym::substitute_dual(X(1)), Q(-1) * X(-1));
  EXPECT_EQ(glv::sym::substitute_dual(X(2)), Q(-2) * X(-2));
  EXPECT_EQ(glv::sym::substitute_dual(A(1) * X(1)), A(1) * Q(-1) * X(-1));
}

TEST(DualHecke, HandExpandedSmallestCase) {
  // n=2, k=1: 1/Q - A1 X + X^2 against Q X^2 (1/Q - A1/(Q X) + 1/(Q^2 X^2)).
  const LaurentPoly lhs = Q(-1) - A(1) * X(1) + X(2);
  const LaurentPoly rhs = Q(1) * X(2) * (Q(-1) - A(1) * Q(-1) * X(-1) + Q(-2) * X(-2));
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(glv::sym::dual_hecke_lhs(2, 1), lhs);
  EXPECT_EQ(glv::sym::dual_hecke_rhs(2, 1), rhs);
}

TEST(DualHecke, ExactForAllSmallDegrees) {
  int cases = 0;
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= n - 1; ++k) {
      const auto result = glv::sym::check_dual_hecke(n, k);
      EXPECT_TRUE(result.holds) << "n=" << n << " k=" << k << " residual " << result.residual.to_string();
      EXPECT_TRUE(result.residual.is_zero());
      ++cases;
    }
  EXPECT_EQ(cases, 28);
}

TEST(DualHecke, ClosedFormOfLeftSide) {
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= n - 1; ++k)
      EXPECT_EQ(glv::sym::dual_hecke_lhs(n, k), glv::sym::dual_hecke_lhs_closed_form(n, k));
}

TEST(DualHecke, DetectsABrokenIdentity) {
  // Dropping the Q^k prefactor must leave a nonzero residual.
  const LaurentPoly wrong = glv::sym::dual_hecke_lhs(4, 2) - glv::sym::dual_hecke_rhs(4, 2) * Q(-1);
  EXPECT_FALSE(wrong.is_zero());
}

TEST(DualHecke, NumericAgreement) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(0.3, 2.5);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= n - 1; ++k) {
      const auto lhs = glv::sym::dual_hecke_lhs(n, k);
      const auto rhs = glv::sym::dual_hecke_rhs(n, k);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> values(static_cast<std::size_t>(n) + 1);
        for (auto& v : values) v = dist(rng);
        const double l = lhs.evaluate(values), r = rhs.evaluate(values);
        EXPECT_NEAR(l, r, 1e-12 * std::max(1.0, std::abs(l)));
      }
    }
}

TEST(DualHecke, RangeChecks) {
  EXPECT_THROW(glv::sym::check_dual_hecke(3, 0), glv::domain_error);
  EXPECT_THROW(glv::sym::check_dual_hecke(3, 3), glv::domain_error);
}
