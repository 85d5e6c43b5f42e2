#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "sd/compensated.hpp"
#include "sd/error.hpp"

namespace sd {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(Complex z, const char* op) {
  if (!is_finite(z)) throw invalid_argument(std::string(op) + ": non-finite argument");
}

/// True when z is (numerically exactly) a nonpositive integer.
inline bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

namespace detail {

// sin(pi x), cos(pi x) with exact argument reduction mod 2.
inline double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

inline double cospi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.5 || r == 1.5) return 0.0;
  if (r == 0.0) return 1.0;
  if (r == 1.0) return -1.0;
  return std::cos(std::numbers::pi * r);
}

inline Complex sinpi(Complex z) {
  const double y = std::numbers::pi * z.imag();
  return {sinpi(z.real()) * std::cosh(y), cospi(z.real()) * std::sinh(y)};
}

// Lanczos approximation, g = 7, n = 9. Valid for Re z >= 0.5.
inline Complex log_gamma_lanczos(Complex z) {
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kG = 7.0;
  const Complex w = z - 1.0;
  Complex series = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) {
    series += kCoef[i] / (w + static_cast<double>(i));
  }
  const Complex t = w + kG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (w + 0.5) * std::log(t) - t +
         std::log(series);
}

}  // namespace detail

/*!
  Complex Gamma function.

  Lanczos approximation on Re z >= 1/2 and the reflection formula
  Gamma(z) Gamma(1 - z) = pi / sin(pi z) elsewhere. Relative error is around
  1e-13 for |z| <= 50.

  Throws numeric_error(pole) at nonpositive integers.
*/
inline Complex gamma(Complex z) {
  require_finite(z, "gamma");
  if (is_nonpositive_integer(z)) {
    throw numeric_error(NumericErrorKind::pole, "gamma: pole at nonpositive integer");
  }
  if (z.real() < 0.5) {
    return std::numbers::pi /
           (detail::sinpi(z) * std::exp(detail::log_gamma_lanczos(1.0 - z)));
  }
  return std::exp(detail::log_gamma_lanczos(z));
}

/// 1/Gamma(z); entire, exactly zero at nonpositive integers.
inline Complex rgamma(Complex z) {
  require_finite(z, "rgamma");
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) {
    return detail::sinpi(z) * std::exp(detail::log_gamma_lanczos(1.0 - z)) /
           std::numbers::pi;
  }
  return std::exp(-detail::log_gamma_lanczos(z));
}

/*!
  Riemann zeta on the half-plane Re s > 1 by Euler-Maclaurin summation.

  Direct sum up to N - 1, integral and half-term corrections at N, then
  Bernoulli corrections until the next term drops below 1e-17 relative to the
  running value. N grows with |s| so the correction series decays quickly.
*/
inline Complex zeta(Complex s) {
  require_finite(s, "zeta");
  if (s.real() <= 1.0) {
    throw numeric_error(NumericErrorKind::domain, "zeta: requires Re s > 1");
  }
  // B_{2k} / (2k)! for k = 1..15.
  static constexpr std::array<double, 15> kBernoulliOverFactorial = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
      7.0 / 6.0 / 87178291200.0,
      -3617.0 / 510.0 / 20922789888000.0,
      43867.0 / 798.0 / 6402373705728000.0,
      -174611.0 / 330.0 / 2432902008176640000.0,
      854513.0 / 138.0 / 1.1240007277776077e21,
      -236364091.0 / 2730.0 / 6.204484017332394e23,
      8553103.0 / 6.0 / 4.0329146112660565e26,
      -23749461029.0 / 870.0 / 3.0488834461171384e29,
      8615841276005.0 / 14322.0 / 2.6525285981219103e32,
  };

  const double n_cut = std::ceil(12.0 + std::abs(s));
  CompensatedComplexSum<double> acc;
  for (double n = 1.0; n < n_cut; n += 1.0) acc += std::exp(-s * std::log(n));

  const double log_n = std::log(n_cut);
  const Complex n_pow = std::exp(-s * log_n);  // N^{-s}
  acc += n_cut * n_pow / (s - 1.0);
  acc += 0.5 * n_pow;

  // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  Complex rising = s;
  Complex power = n_pow / n_cut;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    const Complex term = kBernoulliOverFactorial[k] * rising * power;
    acc += term;
    if (std::abs(term) < 1e-17 * std::abs(acc.value())) break;
    const double m = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + m) * (s + m + 1.0);
    power /= n_cut * n_cut;
  }
  return acc.value();
}

/// Principal-branch base^exponent. base on (-inf, 0] is a domain error unless
/// the exponent is zero.
inline Complex cpow(Complex base, Complex exponent) {
  require_finite(base, "cpow");
  require_finite(exponent, "cpow");
  if (exponent == Complex(0.0, 0.0)) return 1.0;
  if (base.imag() == 0.0 && base.real() <= 0.0) {
    throw numeric_error(NumericErrorKind::domain, "cpow: base on branch cut (-inf, 0]");
  }
  return std::exp(exponent * std::log(base));
}

/// log(1 + a), principal branch, full relative accuracy for small |a|.
inline Complex clog1p(Complex a) {
  require_finite(a, "clog1p");
  if (a.imag() == 0.0 && a.real() <= -1.0) {
    throw numeric_error(NumericErrorKind::domain, "clog1p: 1 + a on branch cut (-inf, 0]");
  }
  const double re = a.real();
  const double im = a.imag();
  if (std::abs(re) < 0.5 && std::abs(im) < 0.5) {
    return {0.5 * std::log1p(re * (2.0 + re) + im * im), std::atan2(im, 1.0 + re)};
  }
  return std::log(1.0 + a);
}

}  // namespace sd
