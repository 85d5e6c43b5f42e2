#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sd/compensated.hpp"
#include "sd/complex_math.hpp"
#include "sd/error.hpp"
#include "sd/functions.hpp"
#include "sd/sieve.hpp"

namespace sd {

inline constexpr std::uint64_t kDefaultPrimeCutoff = 1'000'000;
inline constexpr double kDefaultLocalTolerance = 1e-14;

/// Truncated Euler product. tail_estimate bounds |log value - log true value|
/// (heuristic where `certified` is false).
struct EulerProductResult {
  Complex value;
  std::uint64_t prime_cutoff = 0;
  unsigned k_cutoff = 0;  // largest number of local-series terms used at any prime
  double tail_estimate = 0.0;
  bool certified = true;
};

enum class Verdict { consistent, inconsistent, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct AdmissibilityReport {
  /// Smallest tested sigma at which the Euler product of sum |f(n)| n^{-sigma}
  /// stabilises; NaN when none up to 3 does.
  double abscissa_estimate = std::numeric_limits<double>::quiet_NaN();
  /// (P, sum_{p <= P} (sum_k |f(p^k)| p^{-k(1-c0)})^2), nondecreasing in P.
  std::vector<std::pair<std::uint64_t, double>> square_sum_partials;
  /// Least-squares slope of log(increment) against log(P).
  double decay_exponent = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::inconclusive;
  std::optional<std::uint64_t> witness_prime;
};

namespace detail {

struct LocalSeries {
  Complex value;
  unsigned terms;
};

// F_p(s) = sum_{k>=1} f(p^k) p^{-ks}, truncated once C q^{K+1}/(1-q) <= tol q.
// The relative threshold keeps the summed truncation error over all primes
// below tol * sum_p q_p instead of tol * pi(P).
inline LocalSeries local_series(const MultiplicativeSpec& spec, std::uint64_t p, Complex s,
                                double tol) {
  const double log_p = std::log(static_cast<double>(p));
  const Complex w = std::exp(-s * log_p);
  const double q = spec.growth.r * std::exp(-s.real() * log_p);
  if (q >= 1.0) {
    if (std::abs(q - 1.0) <= 1e-12) {
      throw numeric_error(NumericErrorKind::pole,
                          "local factor pole at p=" + std::to_string(p), p);
    }
    throw numeric_error(NumericErrorKind::divergent,
                        "local factor diverges at p=" + std::to_string(p) +
                            " (p^Re(s) <= growth r)",
                        p);
  }
  constexpr unsigned kMaxTerms = 200000;
  CompensatedComplexSum<double> acc;
  Complex wk = 1.0;
  double bound = spec.growth.C * q / (1.0 - q);  // C q^{k+1}/(1-q) after k terms, k = 0
  unsigned k = 0;
  const double threshold = tol * std::min(1.0, q);
  while ((k == 0 || bound > threshold) && k < kMaxTerms) {
    ++k;
    wk *= w;
    acc += spec.value_at(p, k) * wk;
    bound *= q;
  }
  return {acc.value(), k};
}

// log(1 + F) on any branch; only exp of the total is used.
inline Complex log_one_plus(Complex f) {
  if (std::abs(f) < 0.5) return clog1p(f);
  return std::log(1.0 + f);
}

inline bool near_nonpositive_integer(Complex z) {
  const double r = std::round(z.real());
  const double scale = std::max(1.0, std::abs(z));
  return r <= 0.0 && std::abs(z.real() - r) <= 1e-12 * scale &&
         std::abs(z.imag()) <= 1e-12 * scale;
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                                   0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                                     0.2223810344533745, 0.1012285362903763};

/*!
  First-order tail sum_{p > P} h(p) p^{-s} with h(t) = excess(t) + shift,
  approximated by the prime-number-theorem integral
  int_P^inf h(t) t^{-s} / ln t dt, computed in u = ln t.
*/
inline std::pair<Complex, double> first_order_tail(const MultiplicativeSpec& spec, Complex shift,
                                                   Complex s, std::uint64_t cutoff) {
  const double log_p = std::log(static_cast<double>(cutoff));
  const double sigma = s.real();
  const bool has_fn = spec.excess.kind == PrimeExcess::Kind::function;
  const bool has_shift = shift != Complex(0.0, 0.0);

  double heuristic = 0.0;
  if (spec.excess.kind == PrimeExcess::Kind::unknown) {
    // Assume |f(p) - rho| <= C'/p.
    const double c_prime = spec.growth.C * spec.growth.r + std::abs(spec.rho);
    heuristic = c_prime * std::exp(-sigma * log_p) / (sigma * log_p);
  }
  if (!has_fn && !has_shift) return {0.0, heuristic};

  auto integrand = [&](double u) {
    const double t = std::exp(u);
    Complex h = shift;
    if (has_fn) h += spec.excess.fn(t);
    return h * std::exp((1.0 - s) * u) / u;
  };

  const double width = std::min(0.5, 1.0 / (1.0 + std::abs(s.imag())));
  CompensatedComplexSum<double> acc;
  int quiet_panels = 0;
  for (double a = log_p; a < 700.0; a += width) {
    const double mid = a + 0.5 * width;
    const double half = 0.5 * width;
    Complex panel = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
      panel += kGlWeights[i] * (integrand(mid - half * kGlNodes[i]) + integrand(mid + half * kGlNodes[i]));
    }
    panel *= half;
    acc += panel;
    const double scale = std::max(1e-300, std::abs(acc.value()));
    quiet_panels = std::abs(panel) <= 1e-17 * scale || std::abs(panel) < 1e-300 ? quiet_panels + 1 : 0;
    if (quiet_panels >= 4) {
      const Complex total = acc.value();
      return {total, heuristic + std::abs(total) / log_p};
    }
  }
  throw numeric_error(NumericErrorKind::divergent,
                      "first-order Euler tail does not converge (f(p) - rho too large for Re s)");
}

// Bound on sum_{p > P} of the second-order part of the log local factor.
inline double second_order_tail(const MultiplicativeSpec& spec, Complex rho, double sigma,
                                std::uint64_t cutoff) {
  const double C = spec.growth.C;
  const double r = spec.growth.r;
  const double per_prime = 2.0 * (0.5 * std::abs(rho) + C * r * r + 0.5 * C * C * r * r);
  const double log_p = std::log(static_cast<double>(cutoff));
  const double sum_x2 = 1.5 * std::exp((1.0 - 2.0 * sigma) * log_p) / ((2.0 * sigma - 1.0) * log_p);
  return per_prime * sum_x2;
}

}  // namespace detail

/*!
  Evaluates truncated Euler products over a fixed prime list.

  Holds the primes up to the cutoff so grids of lambda0 / psi evaluations do
  not re-sieve. Immutable after construction.

  Log local factors are accumulated in prime order with compensated summation;
  a fixed order keeps results bit-stable.
*/
class EulerEngine {
 public:
  explicit EulerEngine(std::uint64_t prime_cutoff = kDefaultPrimeCutoff,
                       double local_tolerance = kDefaultLocalTolerance)
      : cutoff_(prime_cutoff), tol_(local_tolerance) {
    if (prime_cutoff < 2) throw invalid_argument("EulerEngine: cutoff must be >= 2");
    if (!(local_tolerance > 0.0)) throw invalid_argument("EulerEngine: tolerance must be > 0");
    primes_ = primes_up_to(prime_cutoff);
  }

  std::uint64_t cutoff() const noexcept { return cutoff_; }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }

  /// lambda0 = (1/Gamma(rho)) prod_p (1 - 1/p)^rho (1 + F_p(1)); exactly 0 for
  /// rho in Z_{<=0}.
  EulerProductResult lambda0(const MultiplicativeSpec& spec) const {
    if (cutoff_ < 100) throw invalid_argument("lambda0: prime cutoff must be >= 100");
    if (!(spec.growth.r < 2.0)) {
      throw invalid_argument("lambda0: growth ratio r must be < 2 for convergence at s = 1");
    }
    require_finite(spec.rho, "lambda0");
    EulerProductResult out;
    out.prime_cutoff = cutoff_;
    if (detail::near_nonpositive_integer(spec.rho)) {
      out.value = 0.0;
      return out;
    }
    const auto [log_sum, k_max, zero] = log_product(spec, Complex(1.0, 0.0), spec.rho);
    out.k_cutoff = k_max;
    if (zero) {
      out.value = 0.0;
      return out;
    }
    const auto [correction, first_err] = detail::first_order_tail(spec, 0.0, 1.0, cutoff_);
    out.tail_estimate = first_err + detail::second_order_tail(spec, spec.rho, 1.0, cutoff_);
    out.certified = spec.excess.kind != PrimeExcess::Kind::unknown;
    out.value = rgamma(spec.rho) * std::exp(log_sum + correction);
    return out;
  }

  /// psi(z) = lambda0(alpha_{e^z}) / lambda0(alpha).
  Complex psi(const MultiplicativeSpec& alpha, Complex z, const AdditiveSpec& g) const {
    return psi_with_denominator(alpha, z, g, denominator(alpha));
  }

  std::vector<Complex> psi_grid(const MultiplicativeSpec& alpha, std::span<const Complex> zs,
                                const AdditiveSpec& g) const {
    const Complex d = denominator(alpha);
    std::vector<Complex> out;
    out.reserve(zs.size());
    for (const Complex z : zs) out.push_back(psi_with_denominator(alpha, z, g, d));
    return out;
  }

  /*!
    G(s) = prod_p (1 - p^{-s})^rho (1 + F_p(s)).

    Certified for Re s > 1; Re s in (max(1/2, 1 - c0), 1] is best effort and
    flagged uncertified.
  */
  EulerProductResult g_compensated(const MultiplicativeSpec& spec, Complex s, Complex rho) const {
    require_finite(s, "g_compensated");
    require_finite(rho, "g_compensated");
    const double sigma = s.real();
    if (sigma <= 1.0 - spec.c0 || sigma <= 0.5) {
      throw numeric_error(NumericErrorKind::domain,
                          "g_compensated: requires Re s > max(1/2, 1 - c0)");
    }
    EulerProductResult out;
    out.prime_cutoff = cutoff_;
    out.certified = sigma > 1.0 && spec.excess.kind != PrimeExcess::Kind::unknown;
    const auto [log_sum, k_max, zero] = log_product(spec, s, rho);
    out.k_cutoff = k_max;
    if (zero) {
      out.value = 0.0;
      return out;
    }
    const auto [correction, first_err] = detail::first_order_tail(spec, spec.rho - rho, s, cutoff_);
    out.tail_estimate = first_err + detail::second_order_tail(spec, rho, sigma, cutoff_);
    out.value = std::exp(log_sum + correction);
    return out;
  }

 private:
  struct LogProduct {
    Complex log_sum;
    unsigned k_max;
    bool zero;
  };

  LogProduct log_product(const MultiplicativeSpec& spec, Complex s, Complex rho) const {
    CompensatedComplexSum<double> acc;
    unsigned k_max = 0;
    for (const std::uint64_t p : primes_) {
      const auto [F, terms] = detail::local_series(spec, p, s, tol_);
      k_max = std::max(k_max, terms);
      if (1.0 + F == Complex(0.0, 0.0)) return {0.0, k_max, true};
      const Complex w = std::exp(-s * std::log(static_cast<double>(p)));
      acc += rho * clog1p(-w) + detail::log_one_plus(F);
    }
    return {acc.value(), k_max, false};
  }

  Complex denominator(const MultiplicativeSpec& alpha) const {
    const Complex d = lambda0(alpha).value;
    if (d == Complex(0.0, 0.0)) {
      throw numeric_error(NumericErrorKind::degenerate, "psi: lambda0(alpha) is zero");
    }
    return d;
  }

  Complex psi_with_denominator(const MultiplicativeSpec& alpha, Complex z, const AdditiveSpec& g,
                               Complex d) const {
    return lambda0(twist_exp(alpha, z, g)).value / d;
  }

  std::uint64_t cutoff_;
  double tol_;
  std::vector<std::uint64_t> primes_;
};

/// F_p(s) for a single prime, truncated to `tol` using the growth bound.
inline Complex local_factor(const MultiplicativeSpec& spec, std::uint64_t p, Complex s,
                            double tol = kDefaultLocalTolerance) {
  require_finite(s, "local_factor");
  if (p < 2) throw invalid_argument("local_factor: p must be prime");
  if (!(tol > 0.0)) throw invalid_argument("local_factor: tol must be > 0");
  return detail::local_series(spec, p, s, tol).value;
}

inline EulerProductResult lambda0(const MultiplicativeSpec& spec,
                                  std::uint64_t prime_cutoff = kDefaultPrimeCutoff) {
  if (prime_cutoff < 100) throw invalid_argument("lambda0: prime cutoff must be >= 100");
  return EulerEngine(prime_cutoff).lambda0(spec);
}

inline Complex psi(const MultiplicativeSpec& alpha, Complex z, const AdditiveSpec& g,
                   std::uint64_t prime_cutoff = kDefaultPrimeCutoff) {
  if (prime_cutoff < 100) throw invalid_argument("psi: prime cutoff must be >= 100");
  return EulerEngine(prime_cutoff).psi(alpha, z, g);
}

inline EulerProductResult g_compensated(const MultiplicativeSpec& spec, Complex s, Complex rho,
                                        std::uint64_t prime_cutoff = kDefaultPrimeCutoff) {
  return EulerEngine(prime_cutoff).g_compensated(spec, s, rho);
}

namespace detail {

struct InnerSum {
  double value;
  bool divergent;
};

// sum_k |f(p^k)| p^{-k sigma}. Falls back to a direct ratio test when the
// growth bound alone cannot certify convergence.
inline InnerSum absolute_local_sum(const MultiplicativeSpec& spec, std::uint64_t p, double sigma) {
  const double x = std::pow(static_cast<double>(p), -sigma);
  const double q = spec.growth.r * x;
  CompensatedSum<double> acc;
  if (q < 1.0) {
    double bound = spec.growth.C * q / (1.0 - q);
    double xk = 1.0;
    unsigned k = 0;
    while (bound > 1e-16 * acc.value() + 1e-300 && k < 200000) {
      ++k;
      xk *= x;
      acc += std::abs(spec.value_at(p, k)) * xk;
      bound *= q;
    }
    return {acc.value(), false};
  }
  constexpr unsigned kTerms = 4000;
  double xk = 1.0;
  double prev = 0.0;
  double last = 0.0;
  for (unsigned k = 1; k <= kTerms; ++k) {
    xk *= x;
    prev = last;
    last = std::abs(spec.value_at(p, k)) * xk;
    acc += last;
    if (!std::isfinite(acc.value())) return {acc.value(), true};
  }
  // Terms must shrink geometrically by the end for a convergent series.
  const bool shrinking = last < 1e-12 * acc.value() || (prev > 0.0 && last / prev < 0.999);
  return {acc.value(), !shrinking};
}

}  // namespace detail

/*!
  Numerical diagnostics for the square-summability condition.

  Partial sums of sum_p (sum_k |f(p^k)| p^{-k(1-c0)})^2 are recorded at each
  cutoff in P_grid. The verdict looks at the increments between successive
  cutoffs: a least-squares power-law exponent below -0.1 is `consistent`,
  a positive exponent is `inconsistent`, anything in between `inconclusive`.
  A divergent inner series is `inconsistent` with the first such prime as
  witness.
*/
inline AdmissibilityReport check_admissibility_pp(
    const MultiplicativeSpec& spec, double c0,
    std::vector<std::uint64_t> P_grid = {100, 1000, 10000, 100000, 1000000}) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw invalid_argument("check_admissibility_pp: c0 in (0, 1)");
  if (P_grid.empty()) throw invalid_argument("check_admissibility_pp: empty cutoff grid");
  std::sort(P_grid.begin(), P_grid.end());
  P_grid.erase(std::unique(P_grid.begin(), P_grid.end()), P_grid.end());
  if (P_grid.front() < 2) throw invalid_argument("check_admissibility_pp: cutoffs must be >= 2");

  AdmissibilityReport report;
  const auto primes = primes_up_to(P_grid.back());
  const double sigma = 1.0 - c0;

  CompensatedSum<double> acc;
  std::size_t next = 0;
  for (const std::uint64_t p : primes) {
    while (next < P_grid.size() && P_grid[next] < p) {
      report.square_sum_partials.emplace_back(P_grid[next], acc.value());
      ++next;
    }
    const auto inner = detail::absolute_local_sum(spec, p, sigma);
    if (inner.divergent) {
      report.verdict = Verdict::inconsistent;
      report.witness_prime = p;
      return report;
    }
    acc += inner.value * inner.value;
  }
  while (next < P_grid.size()) {
    report.square_sum_partials.emplace_back(P_grid[next], acc.value());
    ++next;
  }

  // Power-law fit of the increments.
  std::vector<std::pair<double, double>> pts;
  bool all_zero = true;
  for (std::size_t i = 1; i < report.square_sum_partials.size(); ++i) {
    const double inc = report.square_sum_partials[i].second - report.square_sum_partials[i - 1].second;
    if (inc > 0.0) {
      all_zero = false;
      pts.emplace_back(std::log(static_cast<double>(report.square_sum_partials[i].first)),
                       std::log(inc));
    }
  }
  if (report.square_sum_partials.size() >= 2 && all_zero) {
    report.verdict = Verdict::consistent;
    report.decay_exponent = -std::numeric_limits<double>::infinity();
  } else if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    report.decay_exponent = sxy / sxx;
    if (report.decay_exponent < -0.1) {
      report.verdict = Verdict::consistent;
    } else if (report.decay_exponent > 0.0) {
      report.verdict = Verdict::inconsistent;
    } else {
      report.verdict = Verdict::inconclusive;
    }
  }

  // Abscissa of absolute convergence: scan sigma upward until the log Euler
  // product of sum |f(n)| n^{-sigma} settles between the last two cutoffs.
  if (report.square_sum_partials.size() >= 3) {
    const std::uint64_t p_mid = report.square_sum_partials[report.square_sum_partials.size() - 2].first;
    const std::uint64_t p_first = report.square_sum_partials[report.square_sum_partials.size() - 3].first;
    for (int step = 0; step <= 50; ++step) {
      const double s = 0.5 + 0.05 * step;
      CompensatedSum<double> a1, a2;
      bool divergent = false;
      for (const std::uint64_t p : primes) {
        const auto inner = detail::absolute_local_sum(spec, p, s);
        if (inner.divergent) {
          divergent = true;
          break;
        }
        if (p > p_first) (p <= p_mid ? a1 : a2) += std::log1p(inner.value);
      }
      if (divergent) continue;
      const double inc_prev = a1.value();
      const double inc_last = a2.value();
      if (inc_last < 1e-2 && inc_last < inc_prev) {
        report.abscissa_estimate = s;
        break;
      }
    }
  }
  return report;
}

}  // namespace sd
