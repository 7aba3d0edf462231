#pragma once

// The glvoronoi command line: subcommands kl, chars, lemma, coeffs, fe, verify
// and suite. Every check is written as one JSON object per line. A config file
// of `key = value` lines fills in any option not given on the command line.
//
// Exit status: 0 when every report passes, 1 when any report fails (for verify,
// anything other than pass), 2 for usage errors and invalid parameters.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glvoronoi/chars.hpp"
#include "glvoronoi/coeffs.hpp"
#include "glvoronoi/errors.hpp"
#include "glvoronoi/kloosterman.hpp"
#include "glvoronoi/lfun.hpp"
#include "glvoronoi/report.hpp"
#include "glvoronoi/suite.hpp"
#include "glvoronoi/voronoi.hpp"

namespace glv::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Keys are lower case; '_' and '-' are interchangeable.
inline std::vector<ConfigEntry> parse_config(std::istream& in) {
  std::vector<ConfigEntry> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = detail::trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw parse_error("expected key = value, got '" + text + "'", line);
    std::string key = detail::trim(text.substr(0, eq));
    std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty()) throw parse_error("missing key before '='", line);
    if (value.empty()) throw parse_error("missing value for '" + key + "'", line);
    for (char& c : key) {
      if (c == '_') c = '-';
      if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '-'))
        throw parse_error("bad character in key '" + key + "'", line);
    }
    out.push_back({key, value, line});
  }
  return out;
}

inline std::vector<ConfigEntry> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open config file " + path);
  return parse_config(in);
}

/// Every option of every subcommand. Unused fields keep their defaults.
struct Settings {
  std::string config;
  std::string json_out;

  int n = 3;
  int k = 1;
  std::int64_t q = 5;
  std::int64_t a = 1;
  std::int64_t m = 1;
  std::string alphas;
  std::string file;

  std::string method = "both";
  double kl_tol = 1e-10;

  bool all = false;
  int nmax = 8;

  std::vector<std::string> tuples;
  std::int64_t hecke_q = 0;
  std::int64_t m_max = 1000;

  std::string kind = "standard";
  int points = 20;
  std::uint64_t seed = 20240611;
  std::string s;
  double fe_tol = 1e-8;

  std::string part = "odd";
  double omega_center = 40.0;
  double omega_radius = 30.0;
  double omega_amplitude = 1.0;
  double sigma = 2.0;
  double height = 60.0;
  bool fixed_height = false;
  int nodes = 16;
  int circle_nodes = 128;
  std::optional<double> tol;
  std::int64_t max_terms = std::int64_t{1} << 25;

  bool quick = false;
};

namespace detail {

struct Parser {
  std::unique_ptr<CLI::App> app;
  std::set<std::string> flags;  // option names that take no value
};

inline Parser make_parser(Settings& s) {
  Parser p;
  p.app = std::make_unique<CLI::App>("Numerical checks of GL(n) Voronoi summation formulae", "glvoronoi");
  auto& app = *p.app;
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", s.config, "key = value file; command-line options take precedence");
    sub->add_option("--json", s.json_out, "also write the report lines to this file");
  };
  auto flag = [&](CLI::App* sub, const std::string& name, bool& target, const std::string& help) {
    sub->add_flag("--" + name, target, help);
    p.flags.insert(name);
  };
  auto degree = [&](CLI::App* sub) {
    sub->add_option("--n", s.n, "degree n >= 2");
    sub->add_option("--alphas", s.alphas, "spectral parameters re,im;re,im;... (imaginary, summing to zero)");
  };

  auto* kl = app.add_subcommand("kl", "hyper-Kloosterman sum, directly and through character moments");
  common(kl);
  kl->add_option("--k", s.k, "k >= 1");
  kl->add_option("--m", s.m, "argument m");
  kl->add_option("--q", s.q, "odd prime modulus");
  kl->add_option("--method", s.method, "direct, chars or both")->check(CLI::IsMember({"direct", "chars", "both"}));
  kl->add_option("--tol", s.kl_tol, "agreement required by --method both");

  auto* ch = app.add_subcommand("chars", "character table and Gauss sums modulo q");
  common(ch);
  ch->add_option("--q", s.q, "odd prime modulus");

  auto* lemma = app.add_subcommand("lemma", "exact dual Hecke polynomial identity");
  common(lemma);
  lemma->add_option("--n", s.n, "degree n >= 2");
  lemma->add_option("--k", s.k, "1 <= k <= n-1");
  flag(lemma, "all", s.all, "every 2 <= n <= nmax and 1 <= k <= n-1");
  lemma->add_option("--nmax", s.nmax, "largest degree for --all");

  auto* co = app.add_subcommand("coeffs", "coefficients A(m_1,...,m_{n-1}) and their Hecke relations");
  common(co);
  degree(co);
  co->add_option("--file", s.file, "coefficient table instead of the Eisenstein family");
  co->add_option("--tuple", s.tuples, "m_1,...,m_{n-1}; repeat or separate with ';'")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  co->add_option("--hecke-q", s.hecke_q, "check the Hecke relations at this prime");
  co->add_option("--m-max", s.m_max, "largest m for --hecke-q");

  auto* fe = app.add_subcommand("fe", "twisted functional equations and the pre-inversion identities");
  common(fe);
  degree(fe);
  fe->add_option("--kind", s.kind, "standard, even, odd or chain")
      ->check(CLI::IsMember({"standard", "even", "odd", "chain"}));
  fe->add_option("--k", s.k, "1 <= k <= n-1");
  fe->add_option("--q", s.q, "odd prime modulus");
  fe->add_option("--a", s.a, "residue a, coprime to q");
  fe->add_option("--points", s.points, "number of seeded points in the strip");
  fe->add_option("--seed", s.seed, "seed for the points");
  fe->add_option("--s", s.s, "a single point re,im instead of the seeded grid");
  fe->add_option("--tol", s.fe_tol, "largest accepted relative residual");

  auto* ve = app.add_subcommand("verify", "both sides of a summation formula");
  common(ve);
  degree(ve);
  ve->add_option("--file", s.file, "coefficient table instead of the Eisenstein family");
  ve->add_option("--k", s.k, "1 <= k <= n-1");
  ve->add_option("--q", s.q, "odd prime modulus");
  ve->add_option("--a", s.a, "residue a, coprime to q");
  ve->add_option("--part", s.part, "even, odd or combined")->check(CLI::IsMember({"even", "odd", "combined"}));
  ve->add_option("--omega-center", s.omega_center, "centre c of the bump test function");
  ve->add_option("--omega-radius", s.omega_radius, "radius r < c of the bump");
  ve->add_option("--omega-amplitude", s.omega_amplitude, "amplitude of the bump");
  ve->add_option("--sigma", s.sigma, "contour abscissa, > 1");
  ve->add_option("--height", s.height, "contour height T (raised automatically unless --fixed-height)");
  flag(ve, "fixed-height", s.fixed_height, "use --height exactly");
  ve->add_option("--nodes", s.nodes, "quadrature nodes per unit height");
  ve->add_option("--circle-nodes", s.circle_nodes, "nodes on each circle of the polar correction");
  ve->add_option("--tol", s.tol, "relative tolerance (default 1e-6 odd, 1e-5 even and combined)");
  ve->add_option("--max-terms", s.max_terms, "largest dual cutoff M");

  auto* su = app.add_subcommand("suite", "the full acceptance matrix");
  common(su);
  su->add_option("--seed", s.seed, "seed for random draws and grids");
  flag(su, "quick", s.quick, "smaller grids, n <= 3 and q <= 5");
  su->add_option("--max-terms", s.max_terms, "largest dual cutoff M");

  return p;
}

inline bool truthy(const std::string& v, const ConfigEntry& e) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw parse_error("'" + e.key + "' takes true or false, got '" + v + "'", e.line);
}

/// Command-line tokens with the config entries for options the command line left unset.
inline std::vector<std::string> merge_config(const std::vector<std::string>& args, const Parser& p,
                                             const std::vector<ConfigEntry>& entries) {
  CLI::App* sub = p.app->get_subcommands().front();
  std::vector<std::string> extra;
  for (const auto& e : entries) {
    if (e.key == "config" || e.key == "help") throw parse_error("'" + e.key + "' cannot be set from a config file", e.line);
    const CLI::Option* opt = sub->get_option_no_throw("--" + e.key);
    if (opt == nullptr)
      throw parse_error("unknown config key '" + e.key + "' for " + sub->get_name(), e.line);
    if (opt->count() > 0) continue;
    if (p.flags.count(e.key)) {
      if (truthy(e.value, e)) extra.push_back("--" + e.key);
      continue;
    }
    extra.push_back("--" + e.key);
    extra.push_back(e.value);
  }
  std::vector<std::string> out = args;
  const auto at = std::find(out.begin(), out.end(), sub->get_name());
  out.insert(at == out.end() ? out.end() : at + 1, extra.begin(), extra.end());
  return out;
}

inline void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

// ---------------------------------------------------------------------------
// Parameter handling.

inline void require_odd_prime(std::int64_t q) {
  if (q < 3 || !is_prime(q)) throw domain_error("q must be an odd prime, got " + std::to_string(q));
}

inline void require_k(int n, int k) {
  if (k < 1 || k > n - 1)
    throw domain_error("k must satisfy 1 <= k <= n-1, got k = " + std::to_string(k) + " with n = " + std::to_string(n));
}

inline EisensteinParams spectral_params(const Settings& s, bool n_given) {
  if (s.alphas.empty()) {
    if (s.n < 2) throw domain_error("n must be at least 2");
    return suite::default_params(s.n);
  }
  EisensteinParams p(parse_complex_list(s.alphas));
  if (n_given && p.degree() != s.n)
    throw domain_error("--alphas has " + std::to_string(p.degree()) + " entries but n = " + std::to_string(s.n));
  return p;
}

inline std::shared_ptr<const CoefficientSource> make_source(const Settings& s, bool n_given) {
  if (!s.file.empty()) {
    auto src = load_file_source(s.file);
    if (n_given && src->degree() != s.n)
      throw domain_error("coefficient file has n = " + std::to_string(src->degree()) + " but n = " +
                         std::to_string(s.n));
    return src;
  }
  return std::make_shared<EisensteinSource>(spectral_params(s, n_given));
}

inline Tuple parse_tuple(const std::string& text) {
  Tuple t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = glv::detail::trim(item);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw domain_error("bad tuple entry '" + item + "' in '" + text + "'");
    t.push_back(v);
  }
  return t;
}

inline cd parse_point(const std::string& text) {
  const auto pts = parse_complex_list(text);
  if (pts.size() != 1) throw domain_error("--s expects one point re,im");
  return pts.front();
}

inline json cjson(cd z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Subcommands. Each returns the reports it produced.

inline std::vector<json> run_kl(const Settings& s) {
  require_odd_prime(s.q);
  if (s.k < 1) throw domain_error("k must be at least 1");
  auto modulus = make_modulus(s.q);
  json params{{"k", s.k}, {"m", s.m}, {"q", s.q}, {"method", s.method}};
  if (s.method == "both") {
    const cd direct = kl_direct(s.k, s.m, *modulus);
    const cd chars = kl_via_chars(s.k, s.m, modulus);
    return {comparison_json("kl", params, direct, chars, s.kl_tol)};
  }
  const cd value = s.method == "direct" ? kl_direct(s.k, s.m, *modulus) : kl_via_chars(s.k, s.m, modulus);
  return {report_json("kl", params, value, value, {0.0, 0.0}, 0.0, 0.0, Verdict::pass, json::object())};
}

inline std::vector<json> run_chars(const Settings& s) {
  require_odd_prime(s.q);
  auto modulus = make_modulus(s.q);
  std::vector<json> out;
  for (std::int64_t t = 0; t < modulus->order(); ++t) {
    const DirichletCharacter psi(modulus, t);
    const cd tau = gauss_sum(psi);
    // |tau|^2 is q for a primitive character and 1 for the trivial one.
    const double expected = psi.trivial() ? 1.0 : static_cast<double>(s.q);
    json values = json::array();
    for (std::int64_t m = 1; m < s.q; ++m) values.push_back(cjson(psi(m)));
    json diag{{"gauss_sum", cjson(tau)}, {"values", values}, {"root", modulus->root()}};
    json params{{"q", s.q}, {"index", t}, {"parity", to_string(psi.parity())}};
    out.push_back(comparison_json("gauss_sum", params, std::norm(tau), expected, 1e-10 * expected, diag));
  }
  return out;
}

inline std::vector<json> run_lemma(const Settings& s) {
  std::vector<json> out;
  if (s.all) {
    if (s.nmax < 2) throw domain_error("nmax must be at least 2");
    for (int n = 2; n <= s.nmax; ++n)
      for (int k = 1; k <= n - 1; ++k) out.push_back(suite::lemma_report(n, k));
    return out;
  }
  if (s.n < 2) throw domain_error("n must be at least 2");
  require_k(s.n, s.k);
  out.push_back(suite::lemma_report(s.n, s.k));
  return out;
}

inline std::vector<json> run_coeffs(const Settings& s, bool n_given) {
  std::vector<Tuple> tuples;
  for (const auto& group : s.tuples) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!glv::detail::trim(item).empty()) tuples.push_back(parse_tuple(item));
  }
  if (tuples.empty() && s.hecke_q == 0) throw domain_error("coeffs needs --tuple or --hecke-q");
  const auto src = make_source(s, n_given);
  const int n = src->degree();
  const bool eisenstein = src->kind() == SourceKind::eisenstein;
  json base{{"n", n}, {"source", to_string(src->kind())}};
  std::vector<json> out;
  for (const auto& t : tuples) {
    json params = base;
    params["tuple"] = t;
    const cd value = src->coefficient(t);
    if (eisenstein) {
      // Reversing the tuple conjugates the coefficient.
      Tuple rev(t.rbegin(), t.rend());
      out.push_back(comparison_json("coefficient", params, value, std::conj(src->coefficient(rev)), 1e-10));
    } else {
      out.push_back(report_json("coefficient", params, value, value, {0.0, 0.0}, 0.0, 0.0, Verdict::pass,
                                json::object()));
    }
  }
  if (s.hecke_q != 0) {
    if (s.hecke_q < 2 || !is_prime(s.hecke_q)) throw domain_error("--hecke-q must be prime");
    if (s.m_max < 1) throw domain_error("--m-max must be at least 1");
    for (int i = 1; i <= n - 1; ++i) {
      double worst = 0.0;
      for (std::int64_t m = 1; m <= s.m_max; ++m) worst = std::max(worst, hecke_check(*src, s.hecke_q, m, i));
      json params = base;
      params["q"] = s.hecke_q;
      params["i"] = i;
      params["m_max"] = s.m_max;
      out.push_back(report_json("hecke", params, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, worst, worst,
                                worst <= 1e-10 ? Verdict::pass : Verdict::fail, json{{"tolerance", 1e-10}}));
    }
  }
  return out;
}

inline std::vector<json> run_fe(const Settings& s, bool n_given) {
  const auto params = spectral_params(s, n_given);
  const int n = params.degree();
  if (s.kind != "standard") {
    require_odd_prime(s.q);
    require_k(n, s.k);
    if (mod(s.a, s.q) == 0) throw domain_error("a must be coprime to q");
  }
  const ZParams z{s.q, s.a, s.k};
  std::vector<cd> points;
  if (!s.s.empty()) {
    points.push_back(parse_point(s.s));
  } else {
    if (s.points < 1) throw domain_error("points must be at least 1");
    points = suite::strip_points(s.points, s.seed);
  }
  json base{{"n", n}, {"k", s.k}, {"q", s.q}, {"a", s.a}, {"alpha", suite::alpha_json(params)}};
  std::vector<json> out;
  auto emit = [&](const std::string& kind, cd pt, cd lhs, cd rhs, double residual, json diag) {
    json p = base;
    p["kind"] = kind;
    p["s"] = cjson(pt);
    diag["tolerance"] = s.fe_tol;
    out.push_back(report_json("fe", p, lhs, rhs, {0.0, 0.0}, std::abs(lhs - rhs), residual,
                              residual <= s.fe_tol ? Verdict::pass : Verdict::fail, diag));
  };
  for (const cd& pt : points) {
    if (s.kind == "chain") {
      const auto r = proof_chain_residual(pt, z, params);
      emit("chain_even", pt, r.even_lhs, r.even_rhs, r.even, json::object());
      emit("chain_odd", pt, r.odd_lhs, r.odd_rhs, r.odd, json::object());
      continue;
    }
    const FeKind kind = s.kind == "standard" ? FeKind::standard : (s.kind == "even" ? FeKind::even : FeKind::odd);
    const auto r = fe_residual(kind, pt, z, params);
    emit(s.kind, pt, r.lhs, r.rhs, r.residual, json{{"characters", r.characters}});
  }
  return out;
}

inline std::vector<json> run_verify(const Settings& s, bool n_given) {
  const auto src = make_source(s, n_given);
  require_odd_prime(s.q);
  require_k(src->degree(), s.k);
  if (s.max_terms < 1024) throw domain_error("max-terms must be at least 1024");
  ContourSpec contour;
  contour.sigma = s.sigma;
  contour.T = s.height;
  contour.nodes = s.nodes;
  contour.auto_height = !s.fixed_height;
  const VoronoiInstance in(src, s.q, s.a, s.k, TestFunction(s.omega_center, s.omega_radius, s.omega_amplitude),
                           contour);
  VerifyOptions vo;
  vo.tol = s.tol;
  vo.dual.max_terms = s.max_terms;
  vo.circle_nodes = s.circle_nodes;
  const Part part = s.part == "even" ? Part::even : (s.part == "odd" ? Part::odd : Part::combined);
  return {report_json(verify(in, part, vo))};
}

inline std::vector<json> run_suite(const Settings& s, std::ostream& err) {
  suite::SuiteOptions opt;
  opt.seed = s.seed;
  opt.quick = s.quick;
  opt.max_terms = s.max_terms;
  opt.progress = [&err](const std::string& msg) { err << msg << '\n'; };
  std::vector<json> out;
  for (const auto& r : suite::run_all(opt)) {
    for (const auto& rep : r.reports) out.push_back(rep);
    json diag{{"tolerance", r.tolerance}, {"reports", r.reports.size()}};
    if (!r.note.empty()) diag["note"] = r.note;
    out.push_back(report_json("criterion", json{{"id", r.id}, {"name", r.name}}, {0.0, 0.0}, {0.0, 0.0},
                              {0.0, 0.0}, r.worst, r.worst, r.passed ? Verdict::pass : Verdict::fail, diag));
  }
  return out;
}

}  // namespace detail

/// Runs one command line (without the program name). Reports go to out, messages to err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  auto parser = detail::make_parser(s);
  try {
    detail::parse_into(*parser.app, args);
  } catch (const CLI::CallForHelp& e) {
    return parser.app->exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return parser.app->exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  }

  std::string command;
  bool n_given = false;
  try {
    if (!s.config.empty()) {
      const auto entries = load_config_file(s.config);
      const auto merged = detail::merge_config(args, parser, entries);
      s = Settings{};
      parser = detail::make_parser(s);
      detail::parse_into(*parser.app, merged);
    }
    CLI::App* sub = parser.app->get_subcommands().front();
    command = sub->get_name();
    if (const auto* opt = sub->get_option_no_throw("--n")) n_given = opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << " (after applying " << s.config << ")\n";
    return 2;
  } catch (const parse_error& e) {
    err << "error: config " << s.config << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<json> reports;
  try {
    if (command == "kl") reports = detail::run_kl(s);
    else if (command == "chars") reports = detail::run_chars(s);
    else if (command == "lemma") reports = detail::run_lemma(s);
    else if (command == "coeffs") reports = detail::run_coeffs(s, n_given);
    else if (command == "fe") reports = detail::run_fe(s, n_given);
    else if (command == "verify") reports = detail::run_verify(s, n_given);
    else reports = detail::run_suite(s, err);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::ofstream file;
  if (!s.json_out.empty()) {
    file.open(s.json_out);
    if (!file) {
      err << "error: cannot write " << s.json_out << '\n';
      return 2;
    }
  }
  bool all_pass = true, any_fail = false;
  for (const auto& r : reports) {
    const std::string line = to_json_line(r);
    out << line << '\n';
    if (file) file << line << '\n';
    const auto verdict = r["verdict"].get<std::string>();
    all_pass = all_pass && verdict == "pass";
    any_fail = any_fail || verdict == "fail";
  }
  if (command == "verify") return all_pass ? 0 : 1;
  return any_fail ? 1 : 0;
}

}  // namespace glv::cli
