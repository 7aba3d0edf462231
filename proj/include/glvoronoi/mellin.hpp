#pragma once

// Bump test functions, their Mellin transforms, and the kernels
//   Omega_{+-}(x) = (1/2 pi i) int omega~(s) G_{+-}(s) x^s ds.
// Two routes: pointwise composite Gauss-Legendre, and a batch engine that
// produces Omega on a whole log-x grid with two FFTs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include "glvoronoi/arith.hpp"
#include "glvoronoi/errors.hpp"
#include "glvoronoi/gamma_factors.hpp"

namespace glv {

/// omega(x) = amplitude * exp(1 - 1/(1-u^2)), u = (x - center)/radius, on |u| < 1.
struct TestFunction {
  double center = 40.0;
  double radius = 30.0;
  double amplitude = 1.0;

  TestFunction() = default;
  TestFunction(double c, double r, double amp = 1.0) : center(c), radius(r), amplitude(amp) { validate(); }

  void validate() const {
    if (!(center > 0.0) || !std::isfinite(center)) throw domain_error("test function: center must be positive");
    if (!(radius > 0.0) || !(radius < center))
      throw domain_error("test function: radius must satisfy 0 < r < c");
    if (!std::isfinite(amplitude)) throw domain_error("test function: amplitude must be finite");
  }

  [[nodiscard]] double lower() const noexcept { return center - radius; }
  [[nodiscard]] double upper() const noexcept { return center + radius; }

  double operator()(double x) const noexcept {
    const double u = (x - center) / radius;
    if (!(std::abs(u) < 1.0)) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
};

struct ContourSpec {
  double sigma = 2.0;
  double T = 60.0;
  int nodes = 16;
  // Raise T to the height where |omega~ G| has fallen to rounding level.
  bool auto_height = true;
  double tol = 1e-10;

  void validate() const {
    if (!(sigma > 1.0)) throw domain_error("contour: sigma must exceed 1");
    if (!(T >= 20.0)) throw domain_error("contour: T must be at least 20");
    if (nodes < 2) throw domain_error("contour: nodes per unit must be at least 2");
  }
};

/// Distance from the line Re s = -sigma to the nearest numerator pole of G_+ or G_-.
inline double contour_pole_distance(double sigma, std::span<const cd> lambda) {
  double best = 1e300;
  for (const cd& l : lambda) {
    for (double base : {1.0, 2.0}) {
      // Poles at Re s = base - Re l + 2j, j >= 0.
      const double first = base - l.real();
      const double x = -sigma;
      double d;
      if (x <= first) {
        d = first - x;
      } else {
        const double j = std::floor((x - first) / 2.0);
        d = std::min(x - (first + 2.0 * j), first + 2.0 * (j + 1.0) - x);
      }
      best = std::min(best, d);
    }
  }
  return best;
}

/// The contour with sigma moved off the gamma poles if needed.
inline ContourSpec resolve_contour(ContourSpec spec, std::span<const cd> lambda) {
  spec.validate();
  if (contour_pole_distance(spec.sigma, lambda) >= 0.1) return spec;
  for (double s = 1.5; s <= 3.0 + 1e-12; s += 0.01) {
    if (contour_pole_distance(s, lambda) >= 0.1) {
      spec.sigma = s;
      return spec;
    }
  }
  throw pole_error("contour: no sigma in [1.5, 3] keeps Re s = -sigma 0.1 away from the poles of G");
}

namespace detail {

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

template <unsigned N>
GaussRule make_gauss_rule() {
  using rule = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& a = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
      continue;
    }
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

inline const GaussRule& gauss_rule(int nodes) {
  static const GaussRule r4 = make_gauss_rule<4>();
  static const GaussRule r8 = make_gauss_rule<8>();
  static const GaussRule r16 = make_gauss_rule<16>();
  static const GaussRule r20 = make_gauss_rule<20>();
  static const GaussRule r30 = make_gauss_rule<30>();
  if (nodes <= 4) return r4;
  if (nodes <= 8) return r8;
  if (nodes <= 16) return r16;
  if (nodes <= 20) return r20;
  return r30;
}

}  // namespace detail

/// omega~(re + it) along one vertical line. The bump values at the Gauss nodes
/// are cached per panel count, so each evaluation costs one sincos per node.
class MellinEvaluator {
 public:
  MellinEvaluator(const TestFunction& w, double re) : w_(w), re_(re) {
    a_ = std::log(w.lower());
    len_ = std::log(w.upper()) - a_;
  }

  [[nodiscard]] double real_part() const noexcept { return re_; }

  cd operator()(double t) const {
    if (w_.amplitude == 0.0) return {0.0, 0.0};
    // Panels of phase at most 12 radians: 20 Gauss nodes resolve that to rounding.
    const int need = static_cast<int>(std::ceil(len_ * std::abs(t) / 12.0));
    const int panels = std::max(32, 16 * ((need + 15) / 16));
    const Table& tab = table(panels);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < tab.v.size(); ++i) {
      const double ph = t * tab.v[i];
      re += tab.wf[i] * std::cos(ph);
      im += tab.wf[i] * std::sin(ph);
    }
    return {re, im};
  }

 private:
  struct Table {
    std::vector<double> v;
    std::vector<double> wf;  // Gauss weight * panel half-width * omega(e^v) e^{re v}
  };

  const Table& table(int panels) const {
    auto it = cache_.find(panels);
    if (it != cache_.end()) return it->second;
    const auto& rule = detail::gauss_rule(20);
    const double hw = len_ / (2.0 * panels);
    Table tab;
    for (int p = 0; p < panels; ++p) {
      const double mid = a_ + (2 * p + 1) * hw;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double v = mid + hw * rule.x[i];
        const double f = w_(std::exp(v));
        if (f == 0.0) continue;
        tab.v.push_back(v);
        tab.wf.push_back(rule.w[i] * hw * f * std::exp(re_ * v));
      }
    }
    return cache_.emplace(panels, std::move(tab)).first->second;
  }

  TestFunction w_;
  double re_;
  double a_ = 0.0;
  double len_ = 0.0;
  mutable std::map<int, Table> cache_;
};

/// omega~(s) = int omega(x) x^{s-1} dx, by Gauss-Legendre panels in v = log x.
inline cd mellin(const TestFunction& w, cd s) { return MellinEvaluator(w, s.real())(s.imag()); }

/// The real part of the line on which Omega is integrated: the integrand is
/// entire between Re s = -sigma and the first gamma pole, so any line in that
/// strip gives the same value; Re s = 1/2 keeps |G| of moderate size.
inline double evaluation_line(std::span<const cd> lambda, bool plus, double sigma) {
  const double c = std::min(0.5, first_pole_re(lambda, plus) - 0.5);
  return std::max(c, -sigma);
}

inline cd G_pm(cd s, std::span<const cd> lambda, bool plus) {
  return plus ? G_plus(s, lambda) : G_minus(s, lambda);
}

/// Smallest height past which |omega~(c+it) G(c+it)| stays below 1e-13 of its peak,
/// scanned in steps of 5 and requiring 60 consecutive quiet units. The pointwise
/// transform has a rounding floor near 1e-14 of the peak, so a lower threshold
/// would never be met.
inline double auto_height(const TestFunction& w, std::span<const cd> lambda, bool plus, double c) {
  if (w.amplitude == 0.0) return 0.0;
  const MellinEvaluator mel(w, c);
  double peak = 0.0;
  double last_loud = 0.0;
  constexpr double step = 5.0;
  for (double t = 0.0; t < 50000.0; t += step) {
    const cd s{c, t};
    const double mag = std::max(std::abs(mel(t) * G_pm(s, lambda, plus)),
                                std::abs(mel(-t) * G_pm(std::conj(s), lambda, plus)));
    peak = std::max(peak, mag);
    if (mag > 1e-13 * peak) last_loud = t;
    else if (t - last_loud >= 60.0) break;
  }
  return last_loud + step;
}

struct KernelValue {
  cd value;
  double tail_bound = 0.0;  // estimated |contribution of |Im s| > height|
  double height = 0.0;
  bool warning = false;     // tail bound above the contour tolerance
};

namespace detail {

/// (1/2 pi) int_{-T}^{T} f(t) dt with panels of width one, subdivided where
/// the phase of the integrand turns quickly. edge_mass receives the integrals
/// of |f| over the two outermost units on each side.
template <class F>
cd vertical_integral(F&& f, double T, int nodes, double base_rate, int n, std::array<double, 4>& edge_mass) {
  const auto& rule = gauss_rule(nodes);
  const int units = static_cast<int>(std::ceil(T));
  const double unit = T / units;
  cd total{0.0, 0.0};
  edge_mass.fill(0.0);
  for (int j = -units; j < units; ++j) {
    const double lo = j * unit;
    const double tt = std::max(std::abs(lo), std::abs(lo + unit));
    // Phase speed of omega~ G x^s in t: |log x| + spread of log(supp omega) + n log(t/2 pi).
    const double rate = base_rate + n * std::abs(std::log(std::max(tt, 1.0) / two_pi));
    const int sub = std::max(1, static_cast<int>(std::ceil(rate * unit / 8.0)));
    const double hw = unit / (2.0 * sub);
    cd part{0.0, 0.0};
    double mass = 0.0;
    for (int p = 0; p < sub; ++p) {
      const double mid = lo + (2 * p + 1) * hw;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const cd v = f(mid + hw * rule.x[i]);
        part += rule.w[i] * v;
        mass += rule.w[i] * std::abs(v);
      }
    }
    total += part * hw;
    mass *= hw;
    if (j == -units) edge_mass[0] = mass;
    if (j == -units + 1) edge_mass[1] = mass;
    if (j == units - 2) edge_mass[2] = mass;
    if (j == units - 1) edge_mass[3] = mass;
  }
  return total / two_pi;
}

/// Geometric extrapolation of the mass beyond the last unit from the last two.
/// The decay of omega~ is sub-geometric, hence the safety factor.
inline double geometric_tail(double inner, double outer) {
  if (outer == 0.0) return 0.0;
  const double r = inner > 0.0 ? outer / inner : 1.0;
  if (r >= 0.999) return outer * 1e3;
  return 4.0 * outer * r / (1.0 - r);
}

}  // namespace detail

/// Omega_{+-}(x) by composite Gauss-Legendre on Re s = evaluation_line(...).
inline KernelValue omega_kernel(double x, const TestFunction& w, std::span<const cd> lambda,
                                const ContourSpec& contour, bool plus) {
  if (!(x > 0.0)) throw domain_error("omega kernel: x must be positive");
  const ContourSpec spec = resolve_contour(contour, lambda);
  KernelValue out;
  if (w.amplitude == 0.0) {
    out.height = spec.T;
    return out;
  }
  const double c = evaluation_line(lambda, plus, spec.sigma);
  double T = spec.T;
  if (spec.auto_height) T = std::max(T, auto_height(w, lambda, plus, c));
  const double lx = std::log(x);
  const double support = std::max(std::abs(std::log(w.lower())), std::abs(std::log(w.upper())));
  std::array<double, 4> edge{};
  const cd xc = std::exp(c * lx);
  const MellinEvaluator mel(w, c);
  const cd value = detail::vertical_integral(
      [&](double t) {
        const cd s{c, t};
        return mel(t) * G_pm(s, lambda, plus) * std::polar(1.0, t * lx);
      },
      T, spec.nodes, support + std::abs(lx), static_cast<int>(lambda.size()), edge);
  out.value = value * xc;
  out.height = T;
  const double tail = detail::geometric_tail(edge[1], edge[0]) + detail::geometric_tail(edge[2], edge[3]);
  out.tail_bound = std::abs(xc) * tail / two_pi;
  out.warning = out.tail_bound > spec.tol;
  return out;
}

inline KernelValue omega_plus(double x, const TestFunction& w, std::span<const cd> lambda, const ContourSpec& c) {
  return omega_kernel(x, w, lambda, c, true);
}
inline KernelValue omega_minus(double x, const TestFunction& w, std::span<const cd> lambda, const ContourSpec& c) {
  return omega_kernel(x, w, lambda, c, false);
}

// ---------------------------------------------------------------------------
// Mellin inversion.

struct InversionResult {
  double residual = 0.0;
  double reconstructed = 0.0;
  double exact = 0.0;
};

/// |omega(x) - (1/2 pi i) int_{(sigma)} x^{-s} omega~(s) ds| truncated at +-T.
inline InversionResult mellin_inversion_check(const TestFunction& w, const ContourSpec& contour, double x) {
  contour.validate();
  if (!(x > 0.0)) throw domain_error("mellin inversion: x must be positive");
  const double lx = std::log(x);
  const double support = std::max(std::abs(std::log(w.lower()) - lx), std::abs(std::log(w.upper()) - lx));
  std::array<double, 4> edge{};
  const MellinEvaluator mel(w, contour.sigma);
  const cd value = detail::vertical_integral(
      [&](double t) {
        const cd s{contour.sigma, t};
        return mel(t) * std::exp(-s * lx);
      },
      contour.T, contour.nodes, support, 0, edge);
  InversionResult r;
  r.reconstructed = value.real();
  r.exact = w(x);
  r.residual = std::abs(value - r.exact);
  return r;
}

/// The same inversion at several x and the heights T, 2T, 4T, ..., sharing
/// every omega~ evaluation. result[h][i] is the residual at heights[h], xs[i].
inline std::vector<std::vector<double>> mellin_inversion_study(const TestFunction& w, double sigma, int nodes,
                                                               std::span<const double> heights,
                                                               std::span<const double> xs) {
  if (heights.empty()) return {};
  const auto& rule = detail::gauss_rule(nodes);
  const double Tmax = *std::max_element(heights.begin(), heights.end());
  for (double h : heights)
    if (std::abs(h - std::round(h)) > 0 || h < 1) throw domain_error("inversion study: heights must be whole units");
  double spread = 0.0;
  for (double x : xs) {
    const double lx = std::log(x);
    spread = std::max({spread, std::abs(std::log(w.lower()) - lx), std::abs(std::log(w.upper()) - lx)});
  }
  const int sub = std::max(1, static_cast<int>(std::ceil(spread / 6.0)));
  const double hw = 0.5 / sub;
  // Partial sums per unit |t| in [u, u+1), both signs.
  const auto units = static_cast<std::size_t>(Tmax);
  std::vector<std::vector<cd>> unit_sum(units, std::vector<cd>(xs.size()));
  const MellinEvaluator mel(w, sigma);
  std::vector<double> lx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) lx[i] = std::log(xs[i]);
  for (std::size_t u = 0; u < units; ++u) {
    for (int sign : {-1, 1}) {
      for (int p = 0; p < sub; ++p) {
        const double mid = static_cast<double>(u) + (2 * p + 1) * hw;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
          const double t = sign * (mid + hw * rule.x[q]);
          const cd s{sigma, t};
          const cd m = mel(t) * rule.w[q] * hw;
          for (std::size_t i = 0; i < xs.size(); ++i) unit_sum[u][i] += m * std::exp(-s * lx[i]);
        }
      }
    }
  }
  std::vector<std::vector<double>> out;
  for (double h : heights) {
    std::vector<double> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cd total{0.0, 0.0};
      for (std::size_t u = 0; u < static_cast<std::size_t>(h); ++u) total += unit_sum[u][i];
      row[i] = std::abs(total / two_pi - w(xs[i]));
    }
    out.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Batch kernels on a log grid.
//
// With phi(t) = omega~(c+it) G(c+it) cut off at |t| <= T, Omega(e^u) = e^{cu} f(u)
// where f(u) = (1/2 pi) int phi(t) e^{itu} dt is band-limited to [-T, T]. The
// trapezoid rule in t with step h is spectrally accurate and periodises f with
// period 2 pi / h; one FFT gives f on a grid of step 2 pi / (N h). omega~ on
// the t-grid comes from another FFT, over v = log x. Off-grid values use
// Gaussian-regularised sinc interpolation, which converges geometrically in
// the number of taps because the grid oversamples the band.

namespace detail {

struct FftwPlan {
  explicit FftwPlan(std::size_t n)
      : size(n), buf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!buf) throw std::bad_alloc();
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  cd* data() { return reinterpret_cast<cd*>(buf); }
  void run() { fftw_execute(plan); }

  std::size_t size;
  fftw_complex* buf;
  fftw_plan plan;
};

inline std::int64_t signed_index(std::size_t j, std::size_t N) {
  return j < N / 2 ? static_cast<std::int64_t>(j) : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(N);
}

}  // namespace detail

struct KernelGridOptions {
  bool plus = true;
  double c = 0.5;
  double height = 60.0;
  double u_min = -10.0;  // log x range the grid must cover
  double u_max = 20.0;
  double t_step = 0.05;
  std::size_t fft_size = 0;  // 0: choose from the height
  int half_width = 16;       // interpolation taps on each side
};

/// FFT length so that the grid step in u times the band limit stays <= 0.5.
inline std::size_t kernel_fft_size(double height, double t_step) {
  const double need = 4.0 * std::numbers::pi * height / t_step;
  std::size_t N = 1 << 14;
  while (static_cast<double>(N) < need) N <<= 1;
  return N;
}

class KernelGrid {
 public:
  KernelGrid(const TestFunction& w, std::span<const cd> lambda, KernelGridOptions opt) : opt_(opt) {
    if (!(opt.height > 0.0)) throw domain_error("kernel grid: height must be positive");
    if (!(opt.u_max > opt.u_min)) throw domain_error("kernel grid: empty log range");
    const std::size_t N = opt.fft_size ? opt.fft_size : kernel_fft_size(opt.height, opt.t_step);
    const double h = opt.t_step;
    const double period = two_pi / h;
    if (opt.u_max - opt.u_min + 20.0 > period) throw domain_error("kernel grid: log range exceeds the period");
    if (opt.half_width < 2 || opt.half_width > 32) throw domain_error("kernel grid: half width must lie in [2, 32]");
    delta_ = period / static_cast<double>(N);
    if (opt.height * delta_ > 0.5 + 1e-12) throw domain_error("kernel grid: FFT too short for the height");
    const double c = opt.c;
    detail::FftwPlan fft(N);
    cd* buf = fft.data();

    // omega~(c + i t_j) for t_j = j h.
    const double v0 = std::log(w.lower()) - 1.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double v = v0 + static_cast<double>(k) * delta_;
      const double f = w(std::exp(v));
      buf[k] = f == 0.0 ? cd{0.0, 0.0} : cd{f * std::exp(c * v), 0.0};
    }
    fft.run();
    // phi_j on |t_j| <= 2T; the (T, 2T] part only feeds the truncation estimate.
    std::vector<cd> phi(N);
    tail_mass_ = 0.0;
    double outer_mass = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const auto sj = detail::signed_index(j, N);
      const double t = static_cast<double>(sj) * h;
      if (std::abs(t) > 2.0 * opt.height) continue;
      const cd wt = delta_ * buf[j] * std::polar(1.0, t * v0);
      const cd value = wt * G_pm(cd{c, t}, lambda, opt.plus);
      if (std::abs(t) <= opt.height + 1e-9 * h) {
        // Half weight at a cut landing on the grid, as in the trapezoid rule on [-T, T].
        phi[j] = std::abs(std::abs(t) - opt.height) < 1e-9 * h ? 0.5 * value : value;
      } else {
        tail_mass_ += std::abs(value) * h;
        if (std::abs(t) > 1.5 * opt.height) outer_mass += std::abs(value) * h;
      }
    }
    // Mass beyond 2T extrapolated from the two halves of (T, 2T].
    tail_mass_ += detail::geometric_tail(tail_mass_ - outer_mass, outer_mass);

    // f(u_k) for u_k = u0 + k delta.
    u0_ = opt.u_min - 10.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double t = static_cast<double>(detail::signed_index(j, N)) * h;
      buf[j] = phi[j] * std::polar(1.0, t * u0_);
    }
    fft.run();
    first_ = static_cast<std::size_t>(std::floor((opt.u_min - 1.0 - u0_) / delta_));
    const auto last = static_cast<std::size_t>(std::ceil((opt.u_max + 1.0 - u0_) / delta_));
    f_.resize(last - first_ + 1);
    for (std::size_t k = first_; k <= last; ++k) f_[k - first_] = buf[k] * (h / two_pi);

    // Suffix maxima of |Omega| on the grid, for the dual-sum envelope.
    suffix_.resize(f_.size());
    double run = 0.0;
    for (std::size_t k = f_.size(); k-- > 0;) {
      const double u = u0_ + static_cast<double>(k + first_) * delta_;
      run = std::max(run, std::exp(c * u) * std::abs(f_[k]));
      suffix_[k] = run;
    }
    // Width tuned for the largest allowed band ratio (0.5) so that grids of
    // different heights share one stencil.
    gauss_width2_ = static_cast<double>(opt.half_width) / (std::numbers::pi - 0.5);
    for (int i = 0; i < 2 * opt.half_width; ++i) {
      const double j = i - opt.half_width + 1;
      gauss_table_.push_back(std::exp(-0.5 * j * j / gauss_width2_));
      alternating_.push_back((i - opt.half_width + 1) % 2 == 0 ? 1.0 : -1.0);
    }
  }

  [[nodiscard]] const KernelGridOptions& options() const noexcept { return opt_; }
  [[nodiscard]] double grid_step() const noexcept { return delta_; }

  /// Omega(x) for log x in [u_min, u_max].
  cd operator()(double x) const {
    const double u = std::log(x);
    return std::exp(opt_.c * u) * apply_f(stencil(u));
  }

  [[nodiscard]] double c() const noexcept { return opt_.c; }

  /// A bound for |Omega(e^v)| over v >= u (within the grid's range).
  [[nodiscard]] double envelope_u(double u) const {
    const double pos = (u - u0_) / delta_ - static_cast<double>(first_);
    auto k = static_cast<std::int64_t>(std::floor(pos)) - opt_.half_width;
    k = std::clamp<std::int64_t>(k, 0, static_cast<std::int64_t>(suffix_.size()) - 1);
    // Values between grid points of a band-limited, oversampled function stay
    // close to the neighbouring samples.
    return 1.1 * suffix_[static_cast<std::size_t>(k)];
  }
  [[nodiscard]] double envelope(double x) const { return envelope_u(std::log(x)); }

  /// (1/2 pi) int_{|t|>T} |phi|; times x^c it bounds the change from raising the height.
  [[nodiscard]] double tail_mass() const noexcept { return tail_mass_ / two_pi; }
  [[nodiscard]] double truncation_bound(double x) const { return std::exp(opt_.c * std::log(x)) * tail_mass(); }

  /// Interpolation stencil for u = log x, shared by grids built with identical
  /// u_min, t_step, fft_size and half_width.
  struct Stencil {
    std::int64_t start;
    std::array<double, 64> weight;
    int taps;
  };

  [[nodiscard]] Stencil stencil(double u) const {
    Stencil st{};
    const double pos = (u - u0_) / delta_ - static_cast<double>(first_);
    const auto k0 = static_cast<std::int64_t>(std::floor(pos));
    const double theta = pos - static_cast<double>(k0);
    const int W = opt_.half_width;
    st.start = k0 - W + 1;
    st.taps = 2 * W;
    if (st.start < 0 || st.start + st.taps > static_cast<std::int64_t>(f_.size()))
      throw domain_error("kernel grid: x outside the grid range");
    // Nudged off zero so the sinc needs no special case at grid points.
    const double th = std::max(theta, 1e-13);
    const double s = std::sin(std::numbers::pi * th) / std::numbers::pi;
    // exp(-(th-j)^2 / 2w) = exp(-th^2/2w) * exp(th/w)^j * exp(-j^2/2w), built outward from j = 0.
    const double inv = 1.0 / gauss_width2_;
    const double step = std::exp(th * inv);
    const double back = 1.0 / step;
    const double base = std::exp(-0.5 * th * th * inv);
    double up = base;
    double down = base * back;
    std::array<double, 64> g{};
    for (int j = 0; j < W + 1; ++j, up *= step) g[static_cast<std::size_t>(j + W - 1)] = up;
    for (int j = -1; j > -W; --j, down *= back) g[static_cast<std::size_t>(j + W - 1)] = down;
    for (int i = 0; i < st.taps; ++i) {
      const double d = th - static_cast<double>(i - W + 1);
      st.weight[static_cast<std::size_t>(i)] =
          alternating_[static_cast<std::size_t>(i)] * s / d * g[static_cast<std::size_t>(i)] *
          gauss_table_[static_cast<std::size_t>(i)];
    }
    return st;
  }

  /// e^{-cu} Omega(e^u) at the stencil's point.
  [[nodiscard]] cd apply_f(const Stencil& st) const {
    const cd* f = f_.data() + st.start;
    double re = 0.0, im = 0.0;
    for (int i = 0; i < st.taps; ++i) {
      re += st.weight[static_cast<std::size_t>(i)] * f[i].real();
      im += st.weight[static_cast<std::size_t>(i)] * f[i].imag();
    }
    return {re, im};
  }

 private:
  KernelGridOptions opt_;
  double delta_ = 0.0;
  double u0_ = 0.0;
  std::size_t first_ = 0;
  std::vector<cd> f_;
  std::vector<double> suffix_;
  double tail_mass_ = 0.0;
  double gauss_width2_ = 1.0;
  std::vector<double> gauss_table_;
  std::vector<double> alternating_;  // (-1)^j for tap offset j
};

}  // namespace glv
