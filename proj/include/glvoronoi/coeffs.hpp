#pragma once

// GL(n) Fourier coefficient suppliers. The built-in source is the minimal
// parabolic Eisenstein family with L(s, pi) = prod_j zeta(s - alpha_j); its
// coefficients at a prime are Schur polynomials in p^{alpha_j}. A file source
// serves externally computed coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "glvoronoi/arith.hpp"

namespace glv {

using Tuple = std::vector<std::int64_t>;

enum class SourceKind { eisenstein, file };

inline const char* to_string(SourceKind k) { return k == SourceKind::eisenstein ? "eisenstein" : "file"; }

inline std::string tuple_to_string(std::span<const std::int64_t> m) {
  std::string out = "(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(m[i]);
  }
  return out + ")";
}

// Tuple shapes used by the summation formulae. Positions are 1-based; "from the
// right" position 1 is the last slot.

inline Tuple unit_tuple(int n) { return Tuple(static_cast<std::size_t>(n - 1), 1); }

/// (1,...,1,m).
inline Tuple last_slot(int n, std::int64_t m) {
  Tuple t = unit_tuple(n);
  t.back() = m;
  return t;
}

/// (m,1,...,1).
inline Tuple first_slot(int n, std::int64_t m) {
  Tuple t = unit_tuple(n);
  t.front() = m;
  return t;
}

/// q at position i from the right (i = n gives no q at all), times m in the last slot.
inline Tuple q_from_right(int n, int i, std::int64_t q, std::int64_t m = 1) {
  Tuple t = unit_tuple(n);
  if (i < 1 || i > n) throw domain_error("q_from_right: position out of range");
  if (i < n) t[static_cast<std::size_t>(n - 1 - i)] *= q;
  t.back() *= m;
  return t;
}

/// m in the first slot, times q at position l from the left.
inline Tuple q_from_left(int n, int l, std::int64_t q, std::int64_t m = 1) {
  Tuple t = unit_tuple(n);
  if (l < 1 || l > n - 1) throw domain_error("q_from_left: position out of range");
  t[static_cast<std::size_t>(l - 1)] *= q;
  t.front() *= m;
  return t;
}

class CoefficientSource {
 public:
  virtual ~CoefficientSource() = default;
  [[nodiscard]] virtual int degree() const = 0;
  [[nodiscard]] virtual const std::vector<cd>& spectral() const = 0;
  [[nodiscard]] virtual SourceKind kind() const = 0;
  [[nodiscard]] virtual bool cuspidal() const = 0;
  /// A(m_1, ..., m_{n-1}); entries must be positive.
  [[nodiscard]] virtual cd coefficient(std::span<const std::int64_t> m) const = 0;

  cd operator()(std::span<const std::int64_t> m) const { return coefficient(m); }
  cd operator()(std::initializer_list<std::int64_t> m) const {
    return coefficient(std::span<const std::int64_t>(m.begin(), m.size()));
  }

 protected:
  void check_tuple(std::span<const std::int64_t> m) const {
    if (static_cast<int>(m.size()) != degree() - 1)
      throw domain_error("coefficient: tuple " + tuple_to_string(m) + " must have n-1 = " +
                         std::to_string(degree() - 1) + " entries");
    for (auto x : m)
      if (x < 1) throw domain_error("coefficient: nonpositive entry in " + tuple_to_string(m));
  }
};

/// Purely imaginary alpha_1..alpha_n summing to zero.
struct EisensteinParams {
  std::vector<cd> alpha;

  EisensteinParams() = default;
  explicit EisensteinParams(std::vector<cd> a) : alpha(std::move(a)) { validate(); }

  void validate() const {
    if (alpha.size() < 2) throw domain_error("EisensteinParams: need n >= 2 parameters");
    cd total{0.0, 0.0};
    for (const cd& a : alpha) {
      if (a.real() != 0.0) throw domain_error("EisensteinParams: alpha must be purely imaginary");
      total += a;
    }
    if (std::abs(total) > 1e-14) throw domain_error("EisensteinParams: alpha must sum to zero");
  }
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(alpha.size()); }
  [[nodiscard]] EisensteinParams dual() const {
    EisensteinParams d;
    for (const cd& a : alpha) d.alpha.push_back(-a);
    return d;
  }
};

/// h_0..h_kmax of the variables xs.
inline std::vector<cd> complete_homogeneous(std::span<const cd> xs, int kmax) {
  std::vector<cd> h(static_cast<std::size_t>(kmax) + 1, cd{0.0, 0.0});
  h[0] = 1.0;
  for (const cd& x : xs)
    for (int j = 1; j <= kmax; ++j) h[static_cast<std::size_t>(j)] += x * h[static_cast<std::size_t>(j - 1)];
  return h;
}

/// Determinant by LU with partial pivoting (destroys a).
inline cd determinant(std::vector<std::vector<cd>> a) {
  const std::size_t n = a.size();
  cd det{1.0, 0.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    if (a[pivot][c] == cd{0.0, 0.0}) return {0.0, 0.0};
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const cd f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

/// Schur polynomial s_mu(xs) by the Jacobi-Trudi determinant det h_{mu_i - i + j}.
inline cd schur_polynomial(std::span<const int> mu, std::span<const cd> xs) {
  std::size_t len = mu.size();
  while (len > 0 && mu[len - 1] == 0) --len;
  if (len == 0) return {1.0, 0.0};
  const int top = mu[0] + static_cast<int>(len);
  const auto h = complete_homogeneous(xs, top);
  auto hk = [&](int k) { return (k < 0 || k > top) ? cd{0.0, 0.0} : h[static_cast<std::size_t>(k)]; };
  if (len == 1) return hk(mu[0]);
  std::vector<std::vector<cd>> m(len, std::vector<cd>(len));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < len; ++j)
      m[i][j] = hk(mu[i] - static_cast<int>(i) + static_cast<int>(j));
  return determinant(std::move(m));
}

/// Partition attached to the exponent tuple (k_1, ..., k_{n-1}) of a prime:
/// mu_j = k_1 + ... + k_{n-j}, j = 1..n-1.
inline std::vector<int> exponent_partition(std::span<const int> k) {
  const std::size_t len = k.size();
  std::vector<int> mu(len);
  for (std::size_t j = 1; j <= len; ++j) {
    int s = 0;
    for (std::size_t i = 0; i < len + 1 - j; ++i) s += k[i];
    mu[j - 1] = s;
  }
  return mu;
}

class EisensteinSource final : public CoefficientSource {
 public:
  explicit EisensteinSource(EisensteinParams params) : params_(std::move(params)) {
    params_.validate();
  }

  [[nodiscard]] int degree() const override { return params_.degree(); }
  [[nodiscard]] const std::vector<cd>& spectral() const override { return params_.alpha; }
  [[nodiscard]] SourceKind kind() const override { return SourceKind::eisenstein; }
  [[nodiscard]] bool cuspidal() const override { return false; }
  [[nodiscard]] const EisensteinParams& params() const noexcept { return params_; }
  [[nodiscard]] EisensteinSource dual() const { return EisensteinSource(params_.dual()); }

  /// p^{alpha_j}.
  [[nodiscard]] std::vector<cd> prime_point(std::int64_t p) const {
    std::vector<cd> xs;
    const double lp = std::log(static_cast<double>(p));
    for (const cd& a : params_.alpha) xs.push_back(std::exp(a * lp));
    return xs;
  }

  /// Local factor at p for the exponent tuple k.
  [[nodiscard]] cd local_factor(std::int64_t p, std::span<const int> k) const {
    const auto mu = exponent_partition(k);
    const auto xs = prime_point(p);
    return schur_polynomial(mu, xs);
  }

  [[nodiscard]] cd coefficient(std::span<const std::int64_t> m) const override {
    check_tuple(m);
    std::vector<std::int64_t> primes;
    for (auto x : m)
      for (const auto& [p, e] : factorize(x)) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    cd value{1.0, 0.0};
    std::vector<int> k(m.size());
    for (auto p : primes) {
      for (std::size_t i = 0; i < m.size(); ++i) k[i] = valuation(m[i], p);
      value *= local_factor(p, k);
    }
    return value;
  }

 private:
  EisensteinParams params_;
};

/// Coefficients read from a text file:
///   n=<int>
///   lambda=<re,im;re,im;...>
///   m_1 ... m_{n-1} re im
/// with '#' starting a comment.
class FileSource final : public CoefficientSource {
 public:
  FileSource(int n, std::vector<cd> lambda, std::map<Tuple, cd> table)
      : n_(n), lambda_(std::move(lambda)), table_(std::move(table)) {
    if (n_ < 2) throw domain_error("FileSource: n must be >= 2");
    if (static_cast<int>(lambda_.size()) != n_)
      throw domain_error("FileSource: expected " + std::to_string(n_) + " spectral parameters");
    const auto it = table_.find(unit_tuple(n_));
    if (it == table_.end())
      throw domain_error("FileSource: the normalising row A(1,...,1) = 1 is missing");
    if (std::abs(it->second - cd{1.0, 0.0}) > 1e-12)
      throw domain_error("FileSource: A(1,...,1) must equal 1");
  }

  [[nodiscard]] int degree() const override { return n_; }
  [[nodiscard]] const std::vector<cd>& spectral() const override { return lambda_; }
  [[nodiscard]] SourceKind kind() const override { return SourceKind::file; }
  [[nodiscard]] bool cuspidal() const override { return true; }
  [[nodiscard]] std::size_t size() const noexcept { return table_.size(); }

  [[nodiscard]] bool contains(std::span<const std::int64_t> m) const {
    return table_.count(Tuple(m.begin(), m.end())) != 0;
  }

  [[nodiscard]] cd coefficient(std::span<const std::int64_t> m) const override {
    check_tuple(m);
    const auto it = table_.find(Tuple(m.begin(), m.end()));
    if (it == table_.end())
      throw insufficient_data("insufficient data: no stored coefficient A" + tuple_to_string(m));
    return it->second;
  }

 private:
  int n_;
  std::vector<cd> lambda_;
  std::map<Tuple, cd> table_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw parse_error("malformed number '" + tok + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw parse_error("malformed number '" + tok + "'", line);
  }
}

inline std::int64_t parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw parse_error("malformed integer '" + tok + "'", line);
    return v;
  } catch (const std::logic_error&) {
    throw parse_error("malformed integer '" + tok + "'", line);
  }
}

}  // namespace detail

/// "re,im;re,im;..." into complex numbers.
inline std::vector<cd> parse_complex_list(const std::string& text, int line = 0) {
  std::vector<cd> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      out.emplace_back(detail::parse_double(item, line), 0.0);
    } else {
      out.emplace_back(detail::parse_double(detail::trim(item.substr(0, comma)), line),
                       detail::parse_double(detail::trim(item.substr(comma + 1)), line));
    }
  }
  return out;
}

inline FileSource parse_file_source(std::istream& in) {
  int n = 0;
  std::vector<cd> lambda;
  bool have_lambda = false;
  std::map<Tuple, cd> table;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.rfind("n=", 0) == 0 || text.rfind("n =", 0) == 0) {
      n = static_cast<int>(detail::parse_int(detail::trim(text.substr(text.find('=') + 1)), line));
      if (n < 2) throw parse_error("n must be >= 2", line);
      continue;
    }
    if (text.rfind("lambda", 0) == 0) {
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw parse_error("expected lambda=<re,im;...>", line);
      lambda = parse_complex_list(text.substr(eq + 1), line);
      have_lambda = true;
      continue;
    }
    if (n == 0) throw parse_error("coefficient row before the n= header", line);
    std::stringstream ss(text);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (static_cast<int>(tokens.size()) != n + 1)
      throw parse_error("expected " + std::to_string(n - 1) + " indices and re im, got " +
                            std::to_string(tokens.size()) + " fields",
                        line);
    Tuple key;
    for (int i = 0; i < n - 1; ++i) {
      const auto v = detail::parse_int(tokens[static_cast<std::size_t>(i)], line);
      if (v < 1) throw parse_error("indices must be positive", line);
      key.push_back(v);
    }
    const cd value{detail::parse_double(tokens[static_cast<std::size_t>(n - 1)], line),
                   detail::parse_double(tokens[static_cast<std::size_t>(n)], line)};
    table[key] = value;
  }
  if (n == 0) throw parse_error("missing n= header", line);
  if (!have_lambda) throw parse_error("missing lambda= header", line);
  return FileSource(n, std::move(lambda), std::move(table));
}

inline std::shared_ptr<FileSource> load_file_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("load_file_source: cannot open " + path);
  return std::make_shared<FileSource>(parse_file_source(in));
}

/// Coefficients of the Dirichlet series prod_j zeta(s - b_j) for m = 0..M
/// (entry 0 unused), by repeated Dirichlet convolution with m^{b_j}. Independent
/// of the Schur machinery; used as its oracle.
inline std::vector<cd> zeta_product_coefficients(std::span<const cd> b, std::int64_t M) {
  const auto size = static_cast<std::size_t>(M) + 1;
  std::vector<cd> c(size, cd{0.0, 0.0});
  c[1] = 1.0;
  for (const cd& bj : b) {
    std::vector<cd> next(size, cd{0.0, 0.0});
    for (std::int64_t d = 1; d <= M; ++d) {
      if (c[static_cast<std::size_t>(d)] == cd{0.0, 0.0}) continue;
      for (std::int64_t e = 1; d * e <= M; ++e)
        next[static_cast<std::size_t>(d * e)] +=
            c[static_cast<std::size_t>(d)] * std::exp(bj * std::log(static_cast<double>(e)));
    }
    c = std::move(next);
  }
  return c;
}

/// max_m |A(1,...,1,m) - [m^{-s}] prod zeta(s - alpha_j)| for m <= M.
inline double last_slot_series_check(const EisensteinParams& params, std::int64_t M) {
  if (M < 2) throw domain_error("last_slot_series_check: M must be >= 2");
  const EisensteinSource src(params);
  const auto oracle = zeta_product_coefficients(params.alpha, M);
  double worst = 0.0;
  for (std::int64_t m = 1; m <= M; ++m)
    worst = std::max(worst, std::abs(src(last_slot(src.degree(), m)) - oracle[static_cast<std::size_t>(m)]));
  return worst;
}

/// Residual of A(q@i) A(1,...,1,m) = A(q@i times m) + [q|m] A(q@(i+1) times m/q),
/// with q@n meaning no q. Covers the general relation and both boundary ones.
inline double hecke_check(const CoefficientSource& src, std::int64_t q, std::int64_t m, int i) {
  const int n = src.degree();
  if (i < 1 || i > n - 1) throw domain_error("hecke_check: position i must satisfy 1 <= i <= n-1");
  if (m < 1) throw domain_error("hecke_check: m must be positive");
  const cd lhs = src(q_from_right(n, i, q)) * src(last_slot(n, m));
  cd rhs = src(q_from_right(n, i, q, m));
  if (m % q == 0) rhs += src(q_from_right(n, i + 1, q, m / q));
  return std::abs(lhs - rhs);
}

/// Values of a multiplicative function f over consecutive segments of [1, M],
/// with the q-part split off: for m = q^e m', (m', q) = 1, the segment reports
/// f(m') and e. local(p, k) supplies f(p^k) for p != q.
class PrimeToQSieve {
 public:
  struct Segment {
    std::int64_t lo = 1;
    std::vector<cd> value;   // f(m') for m = lo + index
    std::vector<int> q_exp;  // e
  };

  PrimeToQSieve(const EisensteinParams& params, std::int64_t q, std::int64_t M)
      : alpha_(params.alpha), q_(q), M_(M) {
    const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(M))) + 2;
    small_primes_ = primes_up_to(root);
    // f(p^k) tables for the small primes.
    for (auto p : small_primes_) {
      int kmax = 0;
      for (std::int64_t pk = p; pk <= M; pk *= p) ++kmax;
      const auto xs = point(p);
      local_.push_back(complete_homogeneous(xs, std::max(kmax, 1)));
    }
  }

  [[nodiscard]] std::int64_t limit() const noexcept { return M_; }

  /// Fill seg for [lo, hi).
  void fill(std::int64_t lo, std::int64_t hi, Segment& seg) const {
    const auto len = static_cast<std::size_t>(hi - lo);
    seg.lo = lo;
    seg.value.assign(len, cd{1.0, 0.0});
    seg.q_exp.assign(len, 0);
    std::vector<std::int64_t> rem(len);
    for (std::size_t j = 0; j < len; ++j) rem[j] = lo + static_cast<std::int64_t>(j);
    for (std::size_t pi = 0; pi < small_primes_.size(); ++pi) {
      const std::int64_t p = small_primes_[pi];
      if (p >= hi) break;
      std::int64_t start = ((lo + p - 1) / p) * p;
      for (std::int64_t m = start; m < hi; m += p) {
        const auto j = static_cast<std::size_t>(m - lo);
        int e = 0;
        while (rem[j] % p == 0) {
          rem[j] /= p;
          ++e;
        }
        if (p == q_) seg.q_exp[j] = e;
        else seg.value[j] *= local_[pi][static_cast<std::size_t>(e)];
      }
    }
    // Whatever is left is 1 or a single prime above sqrt(M).
    for (std::size_t j = 0; j < len; ++j) {
      const std::int64_t r = rem[j];
      if (r == 1) continue;
      if (r == q_) {
        seg.q_exp[j] += 1;
        continue;
      }
      // f(r) = h_1 = sum_j r^{alpha_j}.
      const double lr = std::log(static_cast<double>(r));
      cd h{0.0, 0.0};
      for (const cd& a : alpha_) h += std::exp(a * lr);
      seg.value[j] *= h;
    }
  }

 private:
  [[nodiscard]] std::vector<cd> point(std::int64_t p) const {
    std::vector<cd> xs;
    const double lp = std::log(static_cast<double>(p));
    for (const cd& a : alpha_) xs.push_back(std::exp(a * lp));
    return xs;
  }

  std::vector<cd> alpha_;
  std::int64_t q_;
  std::int64_t M_;
  std::vector<std::int64_t> small_primes_;
  std::vector<std::vector<cd>> local_;
};

}  // namespace glv
