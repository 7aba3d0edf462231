#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "glvoronoi/mellin.hpp"

using glv::cd;

namespace {

const std::vector<cd> lambda0{cd{0.0, 0.0}};
const std::vector<cd> lambda2{cd{0.0, 0.6}, cd{0.0, -0.6}};
const std::vector<cd> lambda3{cd{0.0, 0.7}, cd{0.0, -0.3}, cd{0.0, -0.4}};

// Adaptive Simpson for a complex integrand, written independently of the library's Gauss panels.
template <class F>
cd simpson_step(const F& f, double a, double b, cd fa, cd fm, cd fb, cd whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const cd flm = f(lm), frm = f(rm);
  const cd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

template <class F>
cd adaptive_simpson(const F& f, double a, double b, double eps, int pieces) {
  cd total{0.0, 0.0};
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h, hi = lo + h, mid = 0.5 * (lo + hi);
    const cd fa = f(lo), fm = f(mid), fb = f(hi);
    total += simpson_step(f, lo, hi, fa, fm, fb, h / 6.0 * (fa + 4.0 * fm + fb), eps / pieces, 18);
  }
  return total;
}

cd mellin_oracle(const glv::TestFunction& w, cd s) {
  auto f = [&](double y) { return w(y) * std::exp((s - 1.0) * std::log(y)); };
  return adaptive_simpson(f, w.lower(), w.upper(), 1e-11, 64 + static_cast<int>(std::abs(s.imag())));
}

// Lanczos (g = 7) with reflection.
cd lanczos_gamma(cd z) {
  static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * lanczos_gamma(1.0 - z));
  z -= 1.0;
  cd x = c[0];
  for (int i = 1; i < 9; ++i) x += c[static_cast<std::size_t>(i)] / (z + static_cast<double>(i));
  const cd t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

glv::ContourSpec fixed_height(double T) {
  glv::ContourSpec c;
  c.T = T;
  c.auto_height = false;
  return c;
}

}  // namespace

TEST(TestFunction, ShapeAndValidation) {
  const glv::TestFunction w(40.0, 30.0);
  EXPECT_DOUBLE_EQ(w(40.0), 1.0);
  EXPECT_EQ(w(10.0), 0.0);
  EXPECT_EQ(w(70.0), 0.0);
  EXPECT_EQ(w(5.0), 0.0);
  EXPECT_GT(w(10.5), 0.0);
  EXPECT_NEAR(w(25.0), w(55.0), 1e-15);
  EXPECT_THROW(glv::TestFunction(10.0, 10.0), glv::domain_error);
  EXPECT_THROW(glv::TestFunction(-1.0, 0.5), glv::domain_error);
  EXPECT_THROW(glv::TestFunction(10.0, 0.0), glv::domain_error);
}

TEST(Mellin, AgreesWithSimpsonOracle) {
  const glv::TestFunction w(40.0, 30.0);
  const cd one = glv::mellin(w, 1.0);
  EXPECT_GT(one.real(), 0.0);
  EXPECT_NEAR(std::abs(one - mellin_oracle(w, 1.0)), 0.0, 1e-10);
  for (cd s : {cd{2.0, 0.0}, cd{2.0, 10.0}, cd{0.5, -37.0}, cd{-1.5, 250.0}, cd{2.0, 900.0}}) {
    const cd got = glv::mellin(w, s);
    EXPECT_NEAR(std::abs(got - mellin_oracle(w, s)), 0.0, 1e-10) << s;
  }
  // s = 2 is the first moment.
  const auto moment = adaptive_simpson([&](double y) { return cd{y * w(y), 0.0}; }, 10.0, 70.0, 1e-12, 64);
  EXPECT_NEAR(std::abs(glv::mellin(w, 2.0) - moment), 0.0, 1e-10);
}

TEST(Mellin, DecaysFasterThanSixthPower) {
  // For this bump t^6 |omega~(2+it)| only turns over near t = 250, so the
  // monotone stretch is checked on [400, 1600], using the max over windows of 20.
  const glv::TestFunction w(40.0, 30.0);
  const glv::MellinEvaluator mel(w, 2.0);
  double previous = 1e300;
  for (double t = 400.0; t <= 1600.0; t += 100.0) {
    double peak = 0.0;
    for (int i = 0; i < 40; ++i) peak = std::max(peak, std::abs(mel(t + 0.5 * i)));
    const double scaled = peak * std::pow(t, 6);
    EXPECT_LT(scaled, previous) << t;
    previous = scaled;
  }
}

TEST(Mellin, LinearInAmplitude) {
  const glv::TestFunction w1(40.0, 30.0, 1.0), w3(40.0, 30.0, -3.0);
  for (cd s : {cd{2.0, 1.0}, cd{0.5, 80.0}})
    EXPECT_NEAR(std::abs(glv::mellin(w3, s) + 3.0 * glv::mellin(w1, s)), 0.0, 1e-12 * std::abs(glv::mellin(w1, s)) + 1e-15);
}

TEST(GammaFactors, DegreeOneCentre) {
  EXPECT_NEAR(std::abs(glv::G_plus(0.5, lambda0) - 1.0), 0.0, 1e-14);
}

TEST(GammaFactors, ConjugateSymmetryForImaginaryLambda) {
  for (double sigma : {-2.0, -0.5, 0.5}) {
    for (double t : {1.0, 7.5, 40.0, 400.0}) {
      const cd s{sigma, t};
      for (bool plus : {true, false}) {
        const cd a = glv::G_pm(s, lambda2, plus), b = glv::G_pm(std::conj(s), lambda2, plus);
        EXPECT_NEAR(std::abs(a) / std::abs(b), 1.0, 1e-12);
      }
    }
  }
}

TEST(GammaFactors, DegreeTwoAgainstDirectGamma) {
  const double t0 = 0.6;
  const double pi = std::numbers::pi;
  for (cd s : {cd{-1.3, 2.0}, cd{-2.0, 0.5}, cd{0.3, -5.0}, cd{-0.5, 12.0}}) {
    const cd i_t0{0.0, t0};
    const cd plus = std::pow(pi, -2.0 * (0.5 - s)) * lanczos_gamma((1.0 - s + i_t0) / 2.0) *
                    lanczos_gamma((1.0 - s - i_t0) / 2.0) /
                    (lanczos_gamma((s - i_t0) / 2.0) * lanczos_gamma((s + i_t0) / 2.0));
    const cd minus = -std::pow(pi, -2.0 * (0.5 - s)) * lanczos_gamma((2.0 - s + i_t0) / 2.0) *
                     lanczos_gamma((2.0 - s - i_t0) / 2.0) /
                     (lanczos_gamma((s + 1.0 - i_t0) / 2.0) * lanczos_gamma((s + 1.0 + i_t0) / 2.0));
    EXPECT_NEAR(std::abs(glv::G_plus(s, lambda2) / plus - 1.0), 0.0, 1e-11) << s;
    EXPECT_NEAR(std::abs(glv::G_minus(s, lambda2) / minus - 1.0), 0.0, 1e-11) << s;
  }
}

TEST(GammaFactors, PolesThrow) {
  // Gamma((1-s)/2) has a pole at s = 1.
  EXPECT_THROW(glv::G_plus(1.0, lambda0), glv::pole_error);
  EXPECT_THROW(glv::G_minus(2.0, lambda0), glv::pole_error);
}

TEST(Contour, ValidationAndSigmaSearch) {
  glv::ContourSpec c;
  c.sigma = 1.0;
  EXPECT_THROW(c.validate(), glv::domain_error);
  c = {};
  c.T = 10.0;
  EXPECT_THROW(c.validate(), glv::domain_error);
  c = {};
  // Real lambda = 3 puts the first G_+ pole at s = 1 - 3 = -2, exactly on Re s = -2.
  const std::vector<cd> clash{cd{3.0, 0.0}, cd{-3.0, 0.0}};
  EXPECT_LT(glv::contour_pole_distance(2.0, clash), 0.1);
  const auto resolved = glv::resolve_contour(c, clash);
  EXPECT_NE(resolved.sigma, 2.0);
  EXPECT_GE(glv::contour_pole_distance(resolved.sigma, clash), 0.1);
  EXPECT_EQ(glv::resolve_contour(c, lambda3).sigma, 2.0);
}

TEST(Contour, EvaluationLineStaysLeftOfPoles) {
  EXPECT_DOUBLE_EQ(glv::evaluation_line(lambda3, true, 2.0), 0.5);
  const std::vector<cd> shifted{cd{0.4, 1.0}, cd{-0.4, -1.0}};
  EXPECT_NEAR(glv::evaluation_line(shifted, true, 2.0), 0.1, 1e-15);
  EXPECT_LT(glv::evaluation_line(shifted, true, 2.0), glv::first_pole_re(shifted, true));
}

TEST(Omega, ZeroAmplitudeIsZero) {
  const glv::TestFunction zero(40.0, 30.0, 0.0);
  EXPECT_EQ(glv::omega_plus(0.3, zero, lambda3, {}).value, cd(0.0, 0.0));
  EXPECT_EQ(glv::omega_minus(3.0, zero, lambda3, {}).value, cd(0.0, 0.0));
  EXPECT_THROW(glv::omega_plus(0.0, zero, lambda3, {}), glv::domain_error);
}

TEST(Omega, DegreeOneIsCosineTransform) {
  // For zeta the kernel is 2x int omega(y) cos(2 pi x y) dy.
  const glv::TestFunction w(40.0, 30.0);
  glv::KernelGridOptions o;
  o.c = 0.5;
  o.height = glv::auto_height(w, lambda0, true, 0.5);
  o.u_min = -7.0;
  o.u_max = 3.0;
  const glv::KernelGrid grid(w, lambda0, o);
  for (double x : {0.005, 0.02, 0.05, 0.3, 2.0}) {
    const cd oracle =
        2.0 * x * adaptive_simpson([&](double y) { return cd{w(y) * std::cos(glv::two_pi * x * y), 0.0}; }, 10.0, 70.0,
                                   1e-13, 256);
    EXPECT_NEAR(std::abs(grid(x) - oracle), 0.0, 1e-10) << x;
  }
  // One pointwise value through the Gauss route.
  const cd oracle = 2.0 * 0.02 *
                    adaptive_simpson([&](double y) { return cd{w(y) * std::cos(glv::two_pi * 0.02 * y), 0.0}; }, 10.0,
                                     70.0, 1e-13, 256);
  EXPECT_NEAR(std::abs(glv::omega_plus(0.02, w, lambda0, fixed_height(600.0)).value - oracle), 0.0, 1e-9);
}

TEST(Omega, RealForSymmetricImaginaryLambda) {
  const glv::TestFunction w(40.0, 30.0);
  for (double x : {0.05, 1.7}) {
    const auto v = glv::omega_plus(x, w, lambda2, fixed_height(200.0));
    EXPECT_NEAR(v.value.imag(), 0.0, 1e-10) << x;
    EXPECT_GT(std::abs(v.value.real()), 1e-6);
  }
}

TEST(Omega, HeightDoublingWithinTailBound) {
  const glv::TestFunction w(40.0, 30.0);
  for (bool plus : {true, false}) {
    for (double x : {0.01, 1.0, 50.0}) {
      const auto a = glv::omega_kernel(x, w, lambda3, fixed_height(60.0), plus);
      const auto b = glv::omega_kernel(x, w, lambda3, fixed_height(120.0), plus);
      EXPECT_LE(std::abs(a.value - b.value), a.tail_bound) << x << " " << plus;
      EXPECT_TRUE(a.warning);
    }
  }
}

TEST(Omega, AmplitudeLinearity) {
  const glv::TestFunction w1(40.0, 30.0, 1.0), w2(40.0, 30.0, 2.5);
  glv::KernelGridOptions o;
  o.plus = false;
  o.c = glv::evaluation_line(lambda3, false, 2.0);
  o.height = 400.0;
  o.u_min = -5.0;
  o.u_max = 10.0;
  const glv::KernelGrid g1(w1, lambda3, o), g2(w2, lambda3, o);
  for (double x : {0.01, 3.0, 2000.0}) EXPECT_NEAR(std::abs(g2(x) - 2.5 * g1(x)), 0.0, 1e-12 * (1.0 + std::abs(g1(x))));
}

TEST(KernelGrid, MatchesPointwiseQuadrature) {
  const glv::TestFunction w(40.0, 30.0);
  for (bool plus : {true, false}) {
    glv::KernelGridOptions o;
    o.plus = plus;
    o.c = glv::evaluation_line(lambda3, plus, 2.0);
    o.height = 600.0;
    o.u_min = -5.0;
    o.u_max = 15.0;
    const glv::KernelGrid grid(w, lambda3, o);
    for (double x : {0.01, 7.7, 5000.0}) {
      const auto pt = glv::omega_kernel(x, w, lambda3, fixed_height(600.0), plus);
      EXPECT_NEAR(std::abs(grid(x) - pt.value), 0.0, 1e-8) << x << " " << plus;
      EXPECT_GE(grid.envelope(x), std::abs(grid(x)));
    }
    EXPECT_THROW(grid(1e-4), glv::domain_error);
  }
}

TEST(KernelGrid, InterpolationWidthConverged) {
  const glv::TestFunction w(40.0, 30.0);
  glv::KernelGridOptions o;
  o.c = 0.5;
  o.height = 1000.0;
  o.u_min = -3.0;
  o.u_max = 12.0;
  const glv::KernelGrid g16(w, lambda3, o);
  o.half_width = 32;
  const glv::KernelGrid g32(w, lambda3, o);
  for (double x : {0.1, 1.234, 99.9, 31415.9}) EXPECT_NEAR(std::abs(g16(x) - g32(x)), 0.0, 1e-10) << x;
  o.half_width = 40;
  EXPECT_THROW(glv::KernelGrid(w, lambda3, o), glv::domain_error);
}

TEST(KernelGrid, EnvelopeDominatesSamples) {
  const glv::TestFunction w(40.0, 30.0);
  glv::KernelGridOptions o;
  o.c = 0.5;
  o.height = 800.0;
  o.u_min = -3.0;
  o.u_max = 12.0;
  const glv::KernelGrid grid(w, lambda2, o);
  double suffix = 0.0;
  // Walk downward so the running max is the sup over larger x.
  for (double u = 11.0; u >= -2.0; u -= 0.0137) {
    suffix = std::max(suffix, std::abs(grid(std::exp(u))));
    EXPECT_GE(grid.envelope_u(u), suffix) << u;
  }
}

TEST(MellinInversion, CentreAndOutsideSupport) {
  const glv::TestFunction w(40.0, 30.0);
  glv::ContourSpec c = fixed_height(1280.0);
  const auto centre = glv::mellin_inversion_check(w, c, 40.0);
  EXPECT_DOUBLE_EQ(centre.exact, 1.0);
  EXPECT_LE(centre.residual, 1e-8);
  for (double x : {5.0, 80.0}) {
    const auto outside = glv::mellin_inversion_check(w, c, x);
    EXPECT_EQ(outside.exact, 0.0);
    EXPECT_LE(std::abs(outside.reconstructed), 1e-8) << x;
  }
}

TEST(MellinInversion, ResidualShrinksAsHeightDoubles) {
  const glv::TestFunction w(40.0, 30.0);
  const std::vector<double> heights{20, 40, 80, 160, 320, 640, 1280};
  const std::vector<double> xs{12.0, 25.0, 40.0, 47.5, 66.0};
  const auto study = glv::mellin_inversion_study(w, 2.0, 16, heights, xs);
  double previous = 1e300;
  for (const auto& row : study) {
    const double worst = *std::max_element(row.begin(), row.end());
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LE(previous, 1e-8);
}
