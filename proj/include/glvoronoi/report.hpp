#pragma once

// Report objects and their one-line JSON form. Floating-point numbers are
// written with 17 significant digits so that reruns can be diffed byte for byte.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "glvoronoi/voronoi.hpp"

namespace glv {

namespace detail {

inline void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    // JSON has no inf/nan; keep the information as a string.
    out += std::isnan(v) ? "\"nan\"" : (v > 0 ? "\"inf\"" : "\"-inf\"");
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void write_json(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        write_json(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_json(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: write_number(out, j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

}  // namespace detail

/// Compact JSON with 17-significant-digit floats.
inline std::string to_json_line(const json& j) {
  std::string out;
  detail::write_json(out, j);
  return out;
}

/// The report schema shared by every check.
inline json report_json(const std::string& check, const json& params, cd lhs, cd rhs, cd correction,
                        double abs_err, double rel_err, Verdict verdict, const json& diagnostics) {
  json r;
  r["check"] = check;
  r["params"] = params;
  r["lhs"] = detail::complex_json(lhs);
  r["rhs"] = detail::complex_json(rhs);
  r["correction"] = detail::complex_json(correction);
  r["abs_err"] = abs_err;
  r["rel_err"] = rel_err;
  r["verdict"] = to_string(verdict);
  r["diagnostics"] = diagnostics.is_null() ? json::object() : diagnostics;
  return r;
}

inline json report_json(const VerificationReport& v) {
  return report_json(v.check, v.params, v.lhs, v.rhs, v.correction, v.abs_err, v.rel_err, v.verdict,
                     v.diagnostics);
}

/// A comparison of two numbers that should agree: abs and relative error, pass when abs <= tol.
inline json comparison_json(const std::string& check, const json& params, cd lhs, cd rhs, double tol,
                            json diagnostics = json::object()) {
  const double abs_err = std::abs(lhs - rhs);
  const double rel_err = abs_err / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  diagnostics["tolerance"] = tol;
  return report_json(check, params, lhs, rhs, {0.0, 0.0}, abs_err, rel_err,
                     abs_err <= tol ? Verdict::pass : Verdict::fail, diagnostics);
}

}  // namespace glv
