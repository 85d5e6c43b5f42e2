#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sd/complex_math.hpp"
#include "sd/error.hpp"
#include "sd/sieve.hpp"

namespace sd {

/// |f(p^k)| <= C * r^k for every prime p and k >= 1.
struct Growth {
  double C = 1.0;
  double r = 1.0;
};

/*!
  How f(p) deviates from the average value rho at large primes.

  The Euler-product tail beyond a cutoff P is, to first order,
  sum_{p > P} (f(p) - rho) p^{-s}. `vanishes` means f(p) == rho at every prime,
  `function` supplies e(t) = f(t) - rho on real t >= 2, and `unknown` forces a
  heuristic tail bound.
*/
struct PrimeExcess {
  enum class Kind { vanishes, function, unknown };
  Kind kind = Kind::unknown;
  std::function<Complex(double)> fn;

  static PrimeExcess zero() { return {Kind::vanishes, {}}; }
  static PrimeExcess unknown() { return {Kind::unknown, {}}; }
  static PrimeExcess of(std::function<Complex(double)> f) {
    return {Kind::function, std::move(f)};
  }
};

/*!
  A multiplicative function given by its values on prime powers.

  f(1) = 1 is implicit. `rho` is the declared average value, `c0` the
  zero-free-region width used for the admissibility domain, and `growth` a
  geometric bound that lets the Euler engine truncate local series rigorously.
  `M` is carried as metadata only.
*/
struct MultiplicativeSpec {
  std::string name;
  std::function<Complex(std::uint64_t p, unsigned k)> value_at;
  Complex rho{1.0, 0.0};
  double c0 = 0.25;
  Growth growth;
  std::optional<double> M;
  PrimeExcess excess = PrimeExcess::unknown();
};

/// Vertical strip { z : c < Re z < d }.
struct StripDomain {
  double c = -std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();

  StripDomain() = default;
  StripDomain(double lo, double hi) : c(lo), d(hi) {
    if (!(lo < hi)) throw invalid_argument("StripDomain: requires c < d");
  }

  bool contains(Complex z) const { return c < z.real() && z.real() < d; }
};

/*!
  An additive function given by its values on prime powers; g(1) = 0.

  `twist_bound(log_y)` returns (C, r) with |y^{g(p^k)}| <= C r^k, where log_y is
  the logarithm used for the complex power. `strip` is the region of z on
  which n -> e^{z g(n)} alpha(n) stays admissible for the built-in examples.
*/
struct AdditiveSpec {
  enum class Kind { omega, big_omega, table };

  std::string name;
  Kind kind = Kind::omega;
  std::function<Complex(std::uint64_t p, unsigned k)> value_at;
  bool integer_valued = true;
  bool unit_on_primes = true;  // g(p) == 1 for every prime p
  StripDomain strip;
  std::function<Growth(Complex log_y)> twist_bound;
};

// ---------------------------------------------------------------------------
// Evaluation

inline Complex eval(const MultiplicativeSpec& spec, const Factorization& fz) {
  Complex value = 1.0;
  for (const auto& [p, k] : fz.factors) value *= spec.value_at(p, k);
  return value;
}

inline Complex eval(const MultiplicativeSpec& spec, std::uint64_t n,
                    const SieveTable& sieve) {
  sieve.check_range(n, "eval");
  Complex value = 1.0;
  sieve.for_each_prime_power(n, [&](std::uint64_t p, unsigned k) {
    value *= spec.value_at(p, k);
  });
  return value;
}

inline Complex eval_additive(const AdditiveSpec& spec, const Factorization& fz) {
  Complex value = 0.0;
  for (const auto& [p, k] : fz.factors) value += spec.value_at(p, k);
  return value;
}

inline Complex eval_additive(const AdditiveSpec& spec, std::uint64_t n,
                             const SieveTable& sieve) {
  sieve.check_range(n, "eval_additive");
  Complex value = 0.0;
  sieve.for_each_prime_power(n, [&](std::uint64_t p, unsigned k) {
    value += spec.value_at(p, k);
  });
  return value;
}

namespace detail {

inline Complex ipow(Complex base, long long m) {
  if (m < 0) return 1.0 / ipow(base, -m);
  Complex result = 1.0;
  while (m > 0) {
    if (m & 1) result *= base;
    base *= base;
    m >>= 1;
  }
  return result;
}

inline long long as_integer(Complex g) {
  const double r = std::round(g.real());
  if (g.imag() != 0.0 || std::abs(g.real() - r) > 1e-9) {
    throw invalid_argument("additive function value is not an integer");
  }
  return static_cast<long long>(r);
}

inline std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(15);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

// Shared body of twist / twist_exp.
inline MultiplicativeSpec make_twist(const MultiplicativeSpec& alpha,
                                     const AdditiveSpec& g, Complex y,
                                     Complex log_y,
                                     std::optional<Complex> twisted_rho,
                                     std::string label) {
  MultiplicativeSpec out;
  out.name = std::move(label);
  out.c0 = alpha.c0;

  if (twisted_rho) {
    out.rho = *twisted_rho;
  } else if (g.unit_on_primes) {
    out.rho = y * alpha.rho;
  } else {
    throw invalid_argument(
        "twist: additive function is not 1 on primes; supply the twisted average value");
  }

  const Growth gb = g.twist_bound(log_y);
  out.growth = {alpha.growth.C * gb.C, alpha.growth.r * gb.r};

  if (g.unit_on_primes && !twisted_rho) {
    switch (alpha.excess.kind) {
      case PrimeExcess::Kind::vanishes: out.excess = PrimeExcess::zero(); break;
      case PrimeExcess::Kind::function: {
        auto fn = alpha.excess.fn;
        out.excess = PrimeExcess::of([fn, y](double t) { return y * fn(t); });
        break;
      }
      case PrimeExcess::Kind::unknown: out.excess = PrimeExcess::unknown(); break;
    }
  } else {
    out.excess = PrimeExcess::unknown();
  }

  auto base = alpha.value_at;
  auto gval = g.value_at;
  if (g.integer_valued) {
    out.value_at = [base, gval, y](std::uint64_t p, unsigned k) {
      return ipow(y, as_integer(gval(p, k))) * base(p, k);
    };
  } else {
    out.value_at = [base, gval, log_y](std::uint64_t p, unsigned k) {
      return std::exp(gval(p, k) * log_y) * base(p, k);
    };
  }
  return out;
}

}  // namespace detail

/*!
  alpha_y(n) = y^{g(n)} alpha(n).

  Integer-valued g uses exact integer powers; otherwise y^g is taken on the
  principal branch. For g equal to 1 on primes the result has average value
  y * rho; for any other g the caller supplies it.
*/
inline MultiplicativeSpec twist(const MultiplicativeSpec& alpha, Complex y,
                                const AdditiveSpec& g,
                                std::optional<Complex> twisted_rho = std::nullopt) {
  require_finite(y, "twist");
  if (y == Complex(0.0, 0.0)) throw invalid_argument("twist: y must be nonzero");
  return detail::make_twist(alpha, g, y, std::log(y), twisted_rho,
                            alpha.name + "*y^" + g.name + "(y=" +
                                detail::format_complex(y) + ")");
}

/// alpha_{e^z}(n) = e^{z g(n)} alpha(n). Uses z itself as the logarithm, so no
/// branch choice enters for non-integer g.
inline MultiplicativeSpec twist_exp(const MultiplicativeSpec& alpha, Complex z,
                                    const AdditiveSpec& g,
                                    std::optional<Complex> twisted_rho = std::nullopt) {
  require_finite(z, "twist_exp");
  return detail::make_twist(alpha, g, std::exp(z), z, twisted_rho,
                            alpha.name + "*exp(z " + g.name + ")(z=" +
                                detail::format_complex(z) + ")");
}

// ---------------------------------------------------------------------------
// Built-in multiplicative functions

inline MultiplicativeSpec unit() {
  MultiplicativeSpec s;
  s.name = "unit";
  s.value_at = [](std::uint64_t, unsigned) { return Complex(1.0, 0.0); };
  s.rho = 1.0;
  s.growth = {1.0, 1.0};
  s.M = 1.0;
  s.excess = PrimeExcess::zero();
  return s;
}

/// alpha(n) = theta^{omega(n)}.
inline MultiplicativeSpec theta_omega(Complex theta) {
  require_finite(theta, "theta_omega");
  if (theta == Complex(0.0, 0.0)) throw invalid_argument("theta_omega: theta must be nonzero");
  MultiplicativeSpec s;
  s.name = "theta_omega(" + detail::format_complex(theta) + ")";
  s.value_at = [theta](std::uint64_t, unsigned) { return theta; };
  s.rho = theta;
  s.growth = {std::abs(theta), 1.0};
  s.excess = PrimeExcess::zero();
  return s;
}

/// Largest c0 (capped at 1/4) that keeps B below 2^{1 - c0}, halved for margin.
inline double default_c0_for_geometric(double B) {
  return std::min(0.25, 0.5 * (1.0 - std::log2(B)));
}

/// alpha(p^k) = B^k with B in (0, 2^{1 - c0}).
inline MultiplicativeSpec geometric_B(double B, std::optional<double> c0 = std::nullopt) {
  if (!std::isfinite(B) || B <= 0.0 || B >= 2.0) {
    throw invalid_argument("geometric_B: B must lie in (0, 2)");
  }
  const double c = c0.value_or(default_c0_for_geometric(B));
  if (!(c > 0.0 && c < 1.0)) throw invalid_argument("geometric_B: c0 must lie in (0, 1)");
  if (B >= std::pow(2.0, 1.0 - c)) {
    throw invalid_argument("geometric_B: requires B < 2^(1 - c0)");
  }
  MultiplicativeSpec s;
  s.name = "geometric_B(" + detail::format_complex(B) + ")";
  s.value_at = [B](std::uint64_t, unsigned k) {
    return Complex(std::pow(B, static_cast<double>(k)), 0.0);
  };
  s.rho = B;
  s.c0 = c;
  s.growth = {1.0, B};
  s.excess = PrimeExcess::zero();
  return s;
}

/*!
  alpha(p^k) = a + coeff(p, k) with |coeff(p, k)| <= p^{-eps k}.

  coeff takes a real first argument so the Euler engine can integrate the
  first-order tail a + coeff(t, 1) - a over t.
*/
inline MultiplicativeSpec perturbed(double a, double eps,
                                    std::function<double(double, unsigned)> coeff,
                                    std::string label = "") {
  if (!(a > 0.0) || !std::isfinite(a)) throw invalid_argument("perturbed: a must be > 0");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw invalid_argument("perturbed: eps must be > 0");
  if (!coeff) throw invalid_argument("perturbed: coeff is empty");
  MultiplicativeSpec s;
  s.name = label.empty() ? "perturbed(a=" + detail::format_complex(a) + ",eps=" +
                               detail::format_complex(eps) + ")"
                         : std::move(label);
  s.value_at = [a, coeff](std::uint64_t p, unsigned k) {
    return Complex(a + coeff(static_cast<double>(p), k), 0.0);
  };
  s.rho = a;
  s.c0 = 0.5 * std::min(0.5, eps);
  s.growth = {a + 1.0, 1.0};
  s.excess = PrimeExcess::of([coeff](double t) { return Complex(coeff(t, 1), 0.0); });
  return s;
}

/// perturbed with coeff(p, k) = c p^{-eps k}; |c| <= 1 and a >= |c| keep the
/// bound and non-negativity.
inline MultiplicativeSpec perturbed_power(double a, double eps, double c = 1.0) {
  if (!(std::abs(c) <= 1.0)) throw invalid_argument("perturbed: |c| must be <= 1");
  if (a < std::abs(c)) throw invalid_argument("perturbed: requires a >= |c|");
  return perturbed(
      a, eps,
      [eps, c](double p, unsigned k) { return c * std::pow(p, -eps * static_cast<double>(k)); },
      "perturbed(a=" + detail::format_complex(a) + ",eps=" + detail::format_complex(eps) +
          ",c=" + detail::format_complex(c) + ")");
}

/// Generalised binomial C(rho + nu - 1, nu), the p^nu coefficient of
/// (1 - p^{-s})^{-rho}.
inline Complex tau_coefficient(Complex rho, unsigned nu) {
  Complex c = 1.0;
  for (unsigned j = 1; j <= nu; ++j) c *= (rho + static_cast<double>(j) - 1.0) / static_cast<double>(j);
  return c;
}

/// Coefficients of zeta(s)^rho.
inline MultiplicativeSpec tau_rho(Complex rho) {
  require_finite(rho, "tau_rho");
  constexpr double kRatio = 1.5;
  double bound = 0.0;
  Complex c = 1.0;
  double scale = 1.0;
  for (unsigned nu = 1; nu <= 2000; ++nu) {
    c *= (rho + static_cast<double>(nu) - 1.0) / static_cast<double>(nu);
    scale *= kRatio;
    bound = std::max(bound, std::abs(c) / scale);
  }
  MultiplicativeSpec s;
  s.name = "tau_rho(" + detail::format_complex(rho) + ")";
  s.value_at = [rho](std::uint64_t, unsigned k) { return tau_coefficient(rho, k); };
  s.rho = rho;
  s.growth = {std::max(bound, 1e-300) * (1.0 + 1e-12), kRatio};
  s.M = 1.0;
  s.excess = PrimeExcess::zero();
  return s;
}

/// phi(n)/n: value 1 - 1/p at every p^k.
inline MultiplicativeSpec euler_phi_over_n() {
  MultiplicativeSpec s;
  s.name = "euler_phi_over_n";
  s.value_at = [](std::uint64_t p, unsigned) {
    return Complex(1.0 - 1.0 / static_cast<double>(p), 0.0);
  };
  s.rho = 1.0;
  s.growth = {1.0, 1.0};
  s.excess = PrimeExcess::of([](double t) { return Complex(-1.0 / t, 0.0); });
  return s;
}

/// Explicit (p, k) -> value table; every other prime power takes `fallback`.
inline MultiplicativeSpec tabulated(std::string name,
                                    std::map<std::pair<std::uint64_t, unsigned>, Complex> table,
                                    Complex fallback, Complex rho, double c0 = 0.25) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw invalid_argument("tabulated: c0 must lie in (0, 1)");
  double C = std::abs(fallback);
  for (const auto& [key, v] : table) C = std::max(C, std::abs(v));
  MultiplicativeSpec s;
  s.name = std::move(name);
  auto shared = std::make_shared<const std::map<std::pair<std::uint64_t, unsigned>, Complex>>(
      std::move(table));
  s.value_at = [shared, fallback](std::uint64_t p, unsigned k) {
    const auto it = shared->find({p, k});
    return it == shared->end() ? fallback : it->second;
  };
  s.rho = rho;
  s.c0 = c0;
  s.growth = {std::max(C, 1e-300), 1.0};
  s.excess = PrimeExcess::unknown();
  return s;
}

// ---------------------------------------------------------------------------
// Built-in additive functions

inline AdditiveSpec omega_spec() {
  AdditiveSpec g;
  g.name = "omega";
  g.kind = AdditiveSpec::Kind::omega;
  g.value_at = [](std::uint64_t, unsigned) { return Complex(1.0, 0.0); };
  g.twist_bound = [](Complex log_y) { return Growth{std::exp(log_y.real()), 1.0}; };
  return g;
}

/// Omega counts prime factors with multiplicity. Twists e^{z Omega} stay
/// admissible on Re z < ln(2)/2.
inline AdditiveSpec big_omega_spec() {
  AdditiveSpec g;
  g.name = "big_omega";
  g.kind = AdditiveSpec::Kind::big_omega;
  g.value_at = [](std::uint64_t, unsigned k) { return Complex(static_cast<double>(k), 0.0); };
  g.strip = StripDomain(-std::numeric_limits<double>::infinity(), 0.5 * std::log(2.0));
  g.twist_bound = [](Complex log_y) { return Growth{1.0, std::exp(log_y.real())}; };
  return g;
}

/// Explicit (p, k) -> g(p^k) table layered over omega or Omega.
inline AdditiveSpec additive_table(std::string name,
                                   std::map<std::pair<std::uint64_t, unsigned>, Complex> table,
                                   AdditiveSpec::Kind fallback) {
  if (fallback == AdditiveSpec::Kind::table) {
    throw invalid_argument("additive_table: fallback must be omega or big_omega");
  }
  AdditiveSpec base = fallback == AdditiveSpec::Kind::omega ? omega_spec() : big_omega_spec();
  AdditiveSpec g;
  g.name = std::move(name);
  g.kind = AdditiveSpec::Kind::table;
  g.strip = base.strip;
  g.integer_valued = true;
  g.unit_on_primes = true;
  for (const auto& [key, v] : table) {
    if (v.imag() != 0.0 || v.real() != std::round(v.real())) g.integer_valued = false;
    if (key.second == 1 && v != Complex(1.0, 0.0)) g.unit_on_primes = false;
  }
  auto shared = std::make_shared<const std::map<std::pair<std::uint64_t, unsigned>, Complex>>(
      std::move(table));
  auto base_value = base.value_at;
  g.value_at = [shared, base_value](std::uint64_t p, unsigned k) {
    const auto it = shared->find({p, k});
    return it == shared->end() ? base_value(p, k) : it->second;
  };
  auto base_bound = base.twist_bound;
  g.twist_bound = [shared, base_bound](Complex log_y) {
    Growth b = base_bound(log_y);
    for (const auto& [key, v] : *shared) {
      const double mag = std::exp((v * log_y).real());
      b.C = std::max(b.C, mag / std::pow(b.r, static_cast<double>(key.second)));
    }
    return b;
  };
  return g;
}

// ---------------------------------------------------------------------------
// Text grammar
//
//   spec   := name [ ':' params ]
//   params := number | key '=' number { ',' key '=' number }
//
//   unit | euler_phi_over_n
//   theta_omega:<theta>            geometric_B:<B>[,c0=<c0>]
//   tau_rho:<rho>                  perturbed:a=<a>,eps=<eps>[,c=<c>]
//   table:file=<path>,rho=<rho>[,default=<v>][,c0=<c0>]
//
// Table files hold one "p k value [imag]" per line; '#' starts a comment.

class SpecParseError : public invalid_argument {
 public:
  SpecParseError(std::size_t line, std::size_t column, const std::string& message)
      : invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct Param {
  std::string key;  // empty for a positional value
  std::string value;
  std::size_t column;  // 1-based column of the value
};

inline double parse_number(const std::string& text, std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw SpecParseError(line, column, "expected a number, got '" + text + "'");
  }
  return v;
}

inline std::vector<Param> split_params(std::string_view text, std::size_t offset) {
  std::vector<Param> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      out.push_back({"", std::string(item), offset + start + 1});
    } else {
      if (eq == 0) throw SpecParseError(1, offset + start + 1, "empty parameter name");
      out.push_back({std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)),
                     offset + start + eq + 2});
    }
    start = end + 1;
  }
  return out;
}

struct ParamSet {
  std::vector<Param> params;
  std::string spec_name;
  std::size_t name_end;

  const Param* find(const std::string& key) const {
    for (const auto& p : params) {
      if (p.key == key) return &p;
    }
    return nullptr;
  }

  // Value of `key`, or of the sole positional parameter when `positional`.
  const Param& require(const std::string& key, bool positional = false) const {
    if (const Param* p = find(key)) return *p;
    if (positional && params.size() == 1 && params[0].key.empty()) return params[0];
    throw SpecParseError(1, name_end, spec_name + ": missing parameter '" + key + "'");
  }

  double number(const std::string& key, bool positional = false) const {
    const Param& p = require(key, positional);
    return parse_number(p.value, 1, p.column);
  }

  std::optional<double> optional_number(const std::string& key) const {
    const Param* p = find(key);
    if (!p) return std::nullopt;
    return parse_number(p->value, 1, p->column);
  }

  void allow(std::initializer_list<const char*> keys, bool positional) const {
    for (const auto& p : params) {
      if (p.key.empty()) {
        if (!positional || params.size() != 1) {
          throw SpecParseError(1, p.column, spec_name + ": unexpected positional parameter");
        }
        continue;
      }
      bool ok = false;
      for (const char* k : keys) ok = ok || p.key == k;
      if (!ok) throw SpecParseError(1, p.column - p.key.size() - 1,
                                    spec_name + ": unknown parameter '" + p.key + "'");
    }
  }
};

// Reads "p k value [imag]" lines. Throws SpecParseError with file line/column.
inline std::map<std::pair<std::uint64_t, unsigned>, Complex> read_table_file(
    const std::string& path, std::string* directive = nullptr) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot open table file '" + path + "'");
  std::map<std::pair<std::uint64_t, unsigned>, Complex> table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::vector<std::pair<std::string, std::size_t>> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      const std::size_t s = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      fields.emplace_back(line.substr(s, i - s), s + 1);
    }
    if (fields.empty()) continue;
    if (fields[0].first == "fallback") {
      if (!directive || fields.size() != 2) {
        throw SpecParseError(lineno, fields[0].second, "unexpected 'fallback' directive");
      }
      *directive = fields[1].first;
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw SpecParseError(lineno, fields[0].second, "expected 'p k value [imag]'");
    }
    const double p = parse_number(fields[0].first, lineno, fields[0].second);
    const double k = parse_number(fields[1].first, lineno, fields[1].second);
    if (p < 2 || p != std::floor(p)) {
      throw SpecParseError(lineno, fields[0].second, "prime must be an integer >= 2");
    }
    if (k < 1 || k != std::floor(k)) {
      throw SpecParseError(lineno, fields[1].second, "exponent must be an integer >= 1");
    }
    Complex v(parse_number(fields[2].first, lineno, fields[2].second), 0.0);
    if (fields.size() == 4) v.imag(parse_number(fields[3].first, lineno, fields[3].second));
    table[{static_cast<std::uint64_t>(p), static_cast<unsigned>(k)}] = v;
  }
  return table;
}

}  // namespace detail

/// Parses the multiplicative-spec grammar above. Errors carry line 1 and the
/// 1-based column of the offending token.
inline MultiplicativeSpec parse_multiplicative(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  detail::ParamSet ps;
  ps.spec_name = name;
  ps.name_end = name.size() + 1;
  if (colon != std::string::npos) {
    ps.params = detail::split_params(std::string_view(text).substr(colon + 1), colon + 1);
  }
  if (name.empty()) throw SpecParseError(1, 1, "empty function name");

  const bool has_params = colon != std::string::npos;
  if (name == "unit" || name == "euler_phi_over_n") {
    if (has_params) throw SpecParseError(1, colon + 1, name + " takes no parameters");
    return name == "unit" ? unit() : euler_phi_over_n();
  }
  if (name == "theta_omega") {
    ps.allow({"theta"}, true);
    return theta_omega(ps.number("theta", true));
  }
  if (name == "geometric_B") {
    if (ps.params.size() > 1 && ps.params[0].key.empty()) {
      // "geometric_B:1.5,c0=0.1" mixes a leading positional value with keys.
      const double B = detail::parse_number(ps.params[0].value, 1, ps.params[0].column);
      std::optional<double> c0;
      for (std::size_t i = 1; i < ps.params.size(); ++i) {
        if (ps.params[i].key != "c0") {
          throw SpecParseError(1, ps.params[i].column, "geometric_B: unknown parameter");
        }
        c0 = detail::parse_number(ps.params[i].value, 1, ps.params[i].column);
      }
      return geometric_B(B, c0);
    }
    ps.allow({"B", "c0"}, true);
    return geometric_B(ps.number("B", true), ps.optional_number("c0"));
  }
  if (name == "tau_rho") {
    ps.allow({"rho"}, true);
    return tau_rho(ps.number("rho", true));
  }
  if (name == "perturbed") {
    ps.allow({"a", "eps", "c"}, false);
    return perturbed_power(ps.number("a"), ps.number("eps"), ps.optional_number("c").value_or(1.0));
  }
  if (name == "table") {
    ps.allow({"file", "rho", "default", "c0"}, false);
    const auto& file = ps.require("file");
    auto table = detail::read_table_file(file.value);
    return tabulated("table(" + file.value + ")", std::move(table),
                     ps.optional_number("default").value_or(1.0), ps.number("rho"),
                     ps.optional_number("c0").value_or(0.25));
  }
  throw SpecParseError(1, 1, "unknown multiplicative function '" + name + "'");
}

/// "omega" | "big_omega" | "table:<file>". Table files may start with
/// "fallback omega|big_omega" (default omega).
inline AdditiveSpec parse_additive(const std::string& text) {
  if (text == "omega") return omega_spec();
  if (text == "big_omega") return big_omega_spec();
  if (text.rfind("table:", 0) == 0) {
    const std::string path = text.substr(6);
    if (path.empty()) throw SpecParseError(1, 7, "table: missing file name");
    std::string fallback = "omega";
    auto table = detail::read_table_file(path, &fallback);
    AdditiveSpec::Kind kind;
    if (fallback == "omega") {
      kind = AdditiveSpec::Kind::omega;
    } else if (fallback == "big_omega") {
      kind = AdditiveSpec::Kind::big_omega;
    } else {
      throw invalid_argument("table: fallback must be omega or big_omega");
    }
    return additive_table("table(" + path + ")", std::move(table), kind);
  }
  throw SpecParseError(1, 1, "unknown additive function '" + text + "'");
}

}  // namespace sd
