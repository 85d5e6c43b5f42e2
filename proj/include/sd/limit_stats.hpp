#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sd/complex_math.hpp"
#include "sd/error.hpp"
#include "sd/euler.hpp"
#include "sd/exact_sums.hpp"
#include "sd/functions.hpp"
#include "sd/sieve.hpp"

namespace sd {

// Poisson(1) cumulant generating function and its derivatives.
inline Complex eta(Complex z) { return std::exp(z) - 1.0; }
inline Complex eta_prime(Complex z) { return std::exp(z); }
inline Complex eta_second(Complex z) { return std::exp(z); }

/// Legendre transform of eta: sup_t (t s - e^t + 1) = 1 + s (ln s - 1).
inline double eta_star(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw invalid_argument("eta_star: requires s > 0");
  if (s == 1.0) return 0.0;
  return 1.0 + s * (std::log(s) - 1.0);
}

/// Standard normal CDF via erfc, accurate in both tails.
inline double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

enum class LdpMode {
  strict,         // s = 1 rejected: psi(h)/(1 - e^{-h}) diverges as h -> 0
  literal,  // s = 1 uses psi'(0) in place of the prefactor
};

struct LdpPrediction {
  double s = 0.0;
  double h = 0.0;     // eta'(h) = s, i.e. h = ln s
  double rate = 0.0;  // eta*(s)
  double predicted_tail = 0.0;
  double exact_tail = 0.0;
  double ratio = 0.0;  // exact / predicted
  std::optional<std::string> warning;
};

struct CltTailPair {
  double y = 0.0;
  double exact = 0.0;   // P(g(N) >= t + y sqrt(t))
  double normal = 0.0;  // 1 - Phi(y)
};

struct CltReport {
  std::uint64_t x = 0;
  double kolmogorov_distance = 0.0;
  std::vector<CltTailPair> tail_pairs;
  // Moments of Y = (g(N) - t)/sqrt(t) under the exact law, t = rho ln ln x.
  double standardized_mean = 0.0;
  double standardized_variance = 0.0;
};

namespace detail {

inline double positive_real_rho(Complex rho, const char* op) {
  if (rho.imag() != 0.0 || !(rho.real() > 0.0) || !std::isfinite(rho.real())) {
    throw invalid_argument(std::string(op) + ": rho must be real and > 0");
  }
  return rho.real();
}

}  // namespace detail

/// psi'(0) by central differences (step 1e-4) with one Richardson step.
inline double psi_derivative_at_zero(const EulerEngine& engine, const MultiplicativeSpec& alpha,
                                     const AdditiveSpec& g, double step = 1e-4) {
  auto central = [&](double h) {
    return (engine.psi(alpha, h, g).real() - engine.psi(alpha, -h, g).real()) / (2.0 * h);
  };
  return (4.0 * central(0.5 * step) - central(step)) / 3.0;
}

/*!
  Precise large-deviation estimate of P(g(N_{x,alpha}) >= s t), t = rho ln ln x,

    exp(-t eta*(s)) psi(ln s) / (1 - 1/s),

  next to the exact tail from `dist`. h = ln s must lie in g's strip (for
  Omega this means s < sqrt 2).
*/
inline LdpPrediction ldp_predict(const EulerEngine& engine, const MultiplicativeSpec& alpha,
                                 const AdditiveSpec& g, Complex rho,
                                 const DistributionTable& dist, double s,
                                 LdpMode mode = LdpMode::literal) {
  if (!(s > 0.0) || !std::isfinite(s)) throw invalid_argument("ldp_predict: requires s > 0");
  if (dist.x < 16) throw invalid_argument("ldp_predict: requires x >= 16");
  const double r = detail::positive_real_rho(rho, "ldp_predict");
  const double h = std::log(s);
  if (!g.strip.contains(h)) {
    throw invalid_argument("ldp_predict: ln s outside the admissible strip of " + g.name);
  }

  LdpPrediction out;
  out.s = s;
  out.h = h;
  out.rate = eta_star(s);
  const double t = r * ln_ln(dist.x);

  double prefactor = 0.0;
  if (s == 1.0) {
    if (mode == LdpMode::strict) {
      throw invalid_argument("ldp_predict: s = 1 is singular (psi(h)/(1 - e^{-h}) diverges)");
    }
    prefactor = psi_derivative_at_zero(engine, alpha, g);
    out.warning =
        "s = 1: prefactor replaced by psi'(0); the exact ratio psi(h)/(1 - e^{-h}) diverges "
        "as h -> 0";
  } else {
    prefactor = engine.psi(alpha, h, g).real() / (1.0 - 1.0 / s);
  }
  out.predicted_tail = std::exp(-t * out.rate) * prefactor;
  out.exact_tail = dist.tail_at_least(s * t);
  out.ratio = out.exact_tail / out.predicted_tail;
  return out;
}

inline LdpPrediction ldp_predict(const MultiplicativeSpec& alpha, const AdditiveSpec& g,
                                 Complex rho, std::uint64_t x, double s, const SieveTable& sieve,
                                 LdpMode mode = LdpMode::literal,
                                 std::uint64_t prime_cutoff = kDefaultPrimeCutoff) {
  if (!(s > 0.0) || !std::isfinite(s)) throw invalid_argument("ldp_predict: requires s > 0");
  if (x < 16) throw invalid_argument("ldp_predict: requires x >= 16");
  const EulerEngine engine(prime_cutoff);
  return ldp_predict(engine, alpha, g, rho, pmf(alpha, g, x, sieve), s, mode);
}

/// Exact tails and Kolmogorov distance of (g(N) - t)/sqrt(t) against N(0, 1).
inline CltReport clt_report(const DistributionTable& dist, Complex rho,
                            std::span<const double> y_grid) {
  const double r = detail::positive_real_rho(rho, "clt_report");
  if (dist.x < 16) throw invalid_argument("clt_report: requires x >= 16");
  const double t = r * ln_ln(dist.x);
  const double sd = std::sqrt(t);

  CltReport out;
  out.x = dist.x;
  for (const double y : y_grid) {
    out.tail_pairs.push_back({y, std::clamp(dist.tail_at_least(t + y * sd), 0.0, 1.0),
                              1.0 - normal_cdf(y)});
  }

  // The step CDF jumps at each atom; compare both one-sided limits there.
  double below = 0.0;
  double dist_max = 0.0;
  CompensatedSum<double> cdf;
  for (std::size_t m = 0; m < dist.pmf.size(); ++m) {
    const double phi = normal_cdf((static_cast<double>(m) - t) / sd);
    cdf += dist.pmf[m];
    const double at = std::min(1.0, cdf.value());
    dist_max = std::max({dist_max, std::abs(below - phi), std::abs(at - phi)});
    below = at;
  }
  out.kolmogorov_distance = std::clamp(dist_max, 0.0, 1.0);
  out.standardized_mean = (dist.mean - t) / sd;
  out.standardized_variance = dist.variance / t;
  return out;
}

inline CltReport clt_report(const MultiplicativeSpec& alpha, const AdditiveSpec& g, Complex rho,
                            std::uint64_t x, std::span<const double> y_grid,
                            const SieveTable& sieve) {
  detail::positive_real_rho(rho, "clt_report");
  if (x < 16) throw invalid_argument("clt_report: requires x >= 16");
  return clt_report(pmf(alpha, g, x, sieve), rho, y_grid);
}

}  // namespace sd
