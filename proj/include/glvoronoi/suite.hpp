#pragma once

// The acceptance matrix: ten criteria, each reduced to a worst-case number
// against a tolerance, with the individual reports kept for inspection.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "glvoronoi/report.hpp"
#include "glvoronoi/symalg.hpp"

namespace glv::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string note;
  std::vector<json> reports;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  std::int64_t max_terms = std::int64_t{1} << 25;
  // Smaller grids for smoke runs: n <= 3, q <= 5, fewer random points.
  bool quick = false;
  std::function<void(const std::string&)> progress;
};

/// The fixed spectral data used wherever the grid does not ask for random alpha.
inline EisensteinParams default_params(int n) {
  switch (n) {
    case 2: return EisensteinParams({cd{0.0, 0.6}, cd{0.0, -0.6}});
    case 3: return EisensteinParams({cd{0.0, 0.7}, cd{0.0, -0.3}, cd{0.0, -0.4}});
    case 4: return EisensteinParams({cd{0.0, 0.7}, cd{0.0, -0.3}, cd{0.0, -0.5}, cd{0.0, 0.1}});
    default: break;
  }
  throw domain_error("no built-in spectral parameters for n = " + std::to_string(n) + "; pass them explicitly");
}

/// Purely imaginary alpha summing to zero, drawn from rng.
inline EisensteinParams random_params(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  std::vector<cd> a(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    const double t = dist(rng);
    a[static_cast<std::size_t>(j)] = cd{0.0, t};
    total += t;
  }
  a.back() = cd{0.0, -total};
  return EisensteinParams(a);
}

/// Points with -1 <= Re s <= 2, |Im s| <= 30, kept away from the poles on Re s = 1.
inline std::vector<cd> strip_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.0, 2.0), im(-30.0, 30.0);
  std::vector<cd> out;
  while (static_cast<int>(out.size()) < count) {
    const cd s{re(rng), im(rng)};
    if (std::abs(s.real() - 1.0) < 0.05 && std::abs(s.imag()) < 1.0) continue;
    out.push_back(s);
  }
  return out;
}

inline json alpha_json(const EisensteinParams& p) {
  json a = json::array();
  for (const cd& x : p.alpha) a.push_back(detail::complex_json(x));
  return a;
}

namespace detail {

inline void note(const SuiteOptions& opt, const std::string& msg) {
  if (opt.progress) opt.progress(msg);
}

inline CriterionResult start(int id, std::string name, double tolerance) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.tolerance = tolerance;
  return r;
}

inline CriterionResult finish(CriterionResult r) {
  r.passed = r.worst <= r.tolerance;
  return r;
}

}  // namespace detail

inline CriterionResult character_moments() {
  auto r = detail::start(1, "character moments against direct Kloosterman sums", 1e-10);
  for (std::int64_t q : {3, 5, 7, 11, 13}) {
    auto modulus = make_modulus(q);
    const double half = static_cast<double>(q - 1) / 2.0;
    double worst_q = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      for (std::int64_t m = 0; m < q; ++m) {
        const cd even = char_moment(modulus, k, m, Parity::even);
        const cd odd = char_moment(modulus, k, m, Parity::odd);
        cd even_rhs{0.0, 0.0}, odd_rhs{0.0, 0.0};
        if (m != 0) {
          const cd plus = kl_direct(k, m, *modulus), minus = kl_direct(k, -m, *modulus);
          even_rhs = half * (plus + minus) - sign;
          odd_rhs = half * (plus - minus);
        }
        worst_q = std::max({worst_q, std::abs(even - even_rhs), std::abs(odd - odd_rhs)});
      }
    }
    r.worst = std::max(r.worst, worst_q);
    r.reports.push_back(report_json("char_moments", json{{"q", q}, {"k_max", 5}}, {}, {}, {}, worst_q, worst_q,
                                    worst_q <= r.tolerance ? Verdict::pass : Verdict::fail, json::object()));
  }
  return detail::finish(std::move(r));
}

inline json lemma_report(int n, int k) {
  const auto res = sym::check_dual_hecke(n, k);
  json diag;
  diag["residual_terms"] = res.residual.size();
  diag["residual"] = res.residual.to_string();
  return report_json("lemma", json{{"n", n}, {"k", k}}, {}, {}, {}, res.holds ? 0.0 : 1.0, res.holds ? 0.0 : 1.0,
                     res.holds ? Verdict::pass : Verdict::fail, diag);
}

inline CriterionResult dual_hecke_identity() {
  auto r = detail::start(2, "exact dual Hecke polynomial identity, n = 2..8", 0.0);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k <= n - 1; ++k) {
      r.reports.push_back(lemma_report(n, k));
      if (r.reports.back()["verdict"] != "pass") r.worst = 1.0;
    }
  r.note = std::to_string(r.reports.size()) + " cases";
  return detail::finish(std::move(r));
}

inline CriterionResult hecke_relations(const SuiteOptions& opt) {
  auto r = detail::start(3, "Hecke relations of the surrogate coefficients", 1e-10);
  std::mt19937_64 rng(opt.seed);
  const std::int64_t mmax = opt.quick ? 100 : 1000;
  const int draws = opt.quick ? 2 : 5;
  for (int n = 2; n <= 4; ++n)
    for (int d = 0; d < draws; ++d) {
      const auto params = random_params(n, rng);
      const EisensteinSource src(params);
      double worst = 0.0;
      for (std::int64_t q : {2, 3, 5, 7})
        for (int i = 1; i <= n - 1; ++i)
          for (std::int64_t m = 1; m <= mmax; ++m) worst = std::max(worst, hecke_check(src, q, m, i));
      r.worst = std::max(r.worst, worst);
      r.reports.push_back(report_json("hecke", json{{"n", n}, {"alpha", alpha_json(params)}, {"m_max", mmax}}, {},
                                      {}, {}, worst, worst, worst <= r.tolerance ? Verdict::pass : Verdict::fail,
                                      json::object()));
    }
  detail::note(opt, "hecke relations done");
  return detail::finish(std::move(r));
}

inline std::vector<int> degrees(const SuiteOptions& opt) {
  return opt.quick ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4};
}
inline std::vector<std::int64_t> moduli(const SuiteOptions& opt) {
  return opt.quick ? std::vector<std::int64_t>{3, 5} : std::vector<std::int64_t>{3, 5, 7};
}

/// Functional-equation residuals (kind < 3) and the two pre-inversion identities (kind 3).
inline CriterionResult strip_residuals(const SuiteOptions& opt, bool chain) {
  auto r = detail::start(chain ? 5 : 4,
                         chain ? "pre-inversion identities on the strip grid"
                               : "twisted functional equations on the strip grid",
                         1e-8);
  const int count = opt.quick ? 5 : 20;
  for (int n : degrees(opt)) {
    const auto params = default_params(n);
    for (std::int64_t q : moduli(opt))
      for (int k = 1; k <= n - 1; ++k) {
        const ZParams z{q, 1, k};
        const auto points = strip_points(count, opt.seed + static_cast<std::uint64_t>(100 * n + q));
        std::map<std::string, double> worst;
        for (const cd& s : points) {
          if (chain) {
            const auto pc = proof_chain_residual(s, z, params);
            worst["even"] = std::max(worst["even"], pc.even);
            worst["odd"] = std::max(worst["odd"], pc.odd);
          } else {
            for (auto kind : {FeKind::standard, FeKind::even, FeKind::odd}) {
              auto& w = worst[to_string(kind)];
              w = std::max(w, fe_residual(kind, s, z, params).residual);
            }
          }
        }
        for (const auto& [kind, w] : worst) {
          r.worst = std::max(r.worst, w);
          r.reports.push_back(report_json(chain ? "proof_chain" : "fe",
                                          json{{"n", n}, {"q", q}, {"k", k}, {"kind", kind}, {"points", count}}, {},
                                          {}, {}, w, w, w <= r.tolerance ? Verdict::pass : Verdict::fail,
                                          json::object()));
        }
      }
  }
  detail::note(opt, chain ? "pre-inversion identities done" : "functional equations done");
  return detail::finish(std::move(r));
}

inline CriterionResult mellin_roundtrip(const SuiteOptions& opt) {
  auto r = detail::start(6, "Mellin inversion roundtrip with height doubling", 1e-8);
  const std::vector<double> heights{20, 40, 80, 160, 320, 640, 1280};
  bool monotone = true;
  for (const TestFunction w : {TestFunction(40.0, 30.0), TestFunction(6.0, 4.0)}) {
    std::vector<double> xs;
    for (int i = 0; i < 10; ++i) xs.push_back(w.lower() + (i + 0.5) / 10.0 * 2.0 * w.radius);
    const auto study = mellin_inversion_study(w, 2.0, 16, heights, xs);
    json maxima = json::array();
    double previous = 1e300;
    bool mono = true;
    for (const auto& row : study) {
      const double m = *std::max_element(row.begin(), row.end());
      maxima.push_back(m);
      mono = mono && m < previous;
      previous = m;
    }
    monotone = monotone && mono;
    r.worst = std::max(r.worst, previous);
    json diag{{"heights", heights}, {"max_residual_per_height", maxima}, {"monotone", mono}};
    r.reports.push_back(report_json("mellin_inversion", json{{"center", w.center}, {"radius", w.radius}}, {}, {}, {},
                                    previous, previous,
                                    previous <= r.tolerance && mono ? Verdict::pass : Verdict::fail, diag));
  }
  auto out = detail::finish(std::move(r));
  out.passed = out.passed && monotone;
  if (!monotone) out.note = "worst residual did not shrink at every doubling";
  detail::note(opt, "mellin inversion done");
  return out;
}

/// Everything the four end-to-end criteria need, from one dual pass per (n, q).
struct EndToEnd {
  std::vector<VerificationReport> odd, even, combined;
};

inline EndToEnd end_to_end(const SuiteOptions& opt) {
  EndToEnd e;
  for (int n : degrees(opt)) {
    auto src = std::make_shared<EisensteinSource>(default_params(n));
    for (std::int64_t q : moduli(opt)) {
      std::vector<VoronoiInstance> instances;
      for (int k = 1; k <= n - 1; ++k)
        for (std::int64_t a : {1, 2}) instances.emplace_back(src, q, a, k, TestFunction(40.0, 30.0), ContourSpec{});
      // The pass depends only on the source, q and omega; aim it at the tightest instance.
      VerifyOptions vo;
      vo.dual.max_terms = opt.max_terms;
      double target = 1e300;
      for (const auto& in : instances)
        for (Part p : {Part::even, Part::odd}) target = std::min(target, dual_options_for(in, p, vo).target_abs);
      DualOptions d = vo.dual;
      d.target_abs = target;
      const auto& in0 = instances.front();
      const DualPass pass = compute_dual_pass(*src, q, in0.omega, in0.contour, d);
      for (const auto& in : instances) {
        e.odd.push_back(verify(in, Part::odd, pass, vo));
        e.even.push_back(verify(in, Part::even, pass, vo));
        e.combined.push_back(verify(in, Part::combined, pass, vo));
      }
      char buf[160];
      std::snprintf(buf, sizeof buf, "dual pass n=%d q=%lld: M=%lld%s, %.1fs", n, static_cast<long long>(q),
                    static_cast<long long>(pass.M), pass.budget_limited ? " (budget)" : "", pass.seconds);
      detail::note(opt, buf);
    }
  }
  return e;
}

inline CriterionResult odd_formula(const EndToEnd& e) {
  auto r = detail::start(7, "odd summation formula, no correction term", 1e-6);
  for (const auto& v : e.odd) {
    r.worst = std::max(r.worst, v.rel_err);
    if (v.correction != cd{0.0, 0.0}) r.worst = std::max(r.worst, 1.0);
    r.reports.push_back(report_json(v));
  }
  return detail::finish(std::move(r));
}

inline CriterionResult even_formula(const EndToEnd& e) {
  auto r = detail::start(8, "even summation formula with numeric polar correction", 1e-5);
  double node_change = 0.0;
  for (const auto& v : e.even) {
    r.worst = std::max(r.worst, v.rel_err);
    node_change = std::max(node_change, v.diagnostics.value("correction_node_change", 0.0));
    r.reports.push_back(report_json(v));
  }
  auto out = detail::finish(std::move(r));
  char buf[96];
  std::snprintf(buf, sizeof buf, "correction change under node doubling %.3e (limit 1e-9)", node_change);
  out.note = buf;
  out.passed = out.passed && node_change <= 1e-9;
  return out;
}

inline CriterionResult combined_regrouping(const EndToEnd& e) {
  auto r = detail::start(9, "combined formula equals even plus odd", 1e-10);
  for (std::size_t i = 0; i < e.combined.size(); ++i) {
    const auto& c = e.combined[i];
    const auto& ev = e.even[i];
    const auto& od = e.odd[i];
    const double scale = std::max({std::abs(c.lhs), std::abs(c.rhs), 1.0});
    const double d = std::max({std::abs(c.lhs - (ev.lhs + od.lhs)), std::abs(c.rhs - (ev.rhs + od.rhs)),
                               std::abs(c.correction - (ev.correction + od.correction))}) /
                     scale;
    r.worst = std::max(r.worst, d);
    r.reports.push_back(report_json(c));
  }
  return detail::finish(std::move(r));
}

inline CriterionResult truncation_honesty(const EndToEnd& e) {
  // worst = max over reports of observed change / stated bound; must stay below 1.
  auto r = detail::start(10, "doubling cutoff and height stays within the tail bounds", 1.0);
  for (const auto* group : {&e.odd, &e.even, &e.combined})
    for (const auto& v : *group) {
      const double change = std::max(
          {std::abs(v.rhs_cut2 - v.rhs), std::abs(v.rhs_height2 - v.rhs), std::abs(v.rhs_both2 - v.rhs)});
      const double ratio = v.tail_bound > 0.0 ? change / v.tail_bound : (change > 0.0 ? 1e300 : 0.0);
      r.worst = std::max(r.worst, ratio);
    }
  // The left sides are finite sums and do not depend on either parameter.
  r.note = "ratio of observed change to stated bound";
  auto out = detail::finish(std::move(r));
  out.passed = out.worst < 1.0;
  return out;
}

/// All ten criteria in order.
inline std::vector<CriterionResult> run_all(const SuiteOptions& opt) {
  std::vector<CriterionResult> out;
  out.push_back(character_moments());
  detail::note(opt, "character moments done");
  out.push_back(dual_hecke_identity());
  detail::note(opt, "polynomial identity done");
  out.push_back(hecke_relations(opt));
  out.push_back(strip_residuals(opt, false));
  out.push_back(strip_residuals(opt, true));
  out.push_back(mellin_roundtrip(opt));
  const EndToEnd e = end_to_end(opt);
  out.push_back(odd_formula(e));
  out.push_back(even_formula(e));
  out.push_back(combined_regrouping(e));
  out.push_back(truncation_honesty(e));
  return out;
}

inline std::string summary_line(const CriterionResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "criterion %2d %s  worst=%.3e tol=%.1e  %s", r.id, r.passed ? "PASS" : "FAIL",
                r.worst, r.tolerance, r.name.c_str());
  std::string line = buf;
  if (!r.note.empty()) line += "  (" + r.note + ")";
  return line;
}

}  // namespace glv::suite
