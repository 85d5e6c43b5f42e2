#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sd/compensated.hpp"
#include "sd/complex_math.hpp"
#include "sd/error.hpp"
#include "sd/functions.hpp"
#include "sd/sieve.hpp"

namespace sd {

/// w[n] = alpha(n) for 1 <= n <= x and its running sums; the law of N_{x,alpha}.
struct WeightTable {
  std::uint64_t x = 0;
  std::vector<double> weights;     // weights[n - 1] = alpha(n)
  std::vector<double> cumulative;  // cumulative[n - 1] = alpha(1) + ... + alpha(n)

  double total() const { return cumulative.back(); }
};

/// Exact law of g(N_{x,alpha}) for integer-valued g >= 0.
struct DistributionTable {
  std::uint64_t x = 0;
  std::vector<double> pmf;  // pmf[m] = P(g(N) = m)
  double mean = 0.0;
  double variance = 0.0;

  /// P(g(N) >= threshold), summing buckets from ceil(threshold) upward.
  double tail_at_least(double threshold) const {
    const double start = std::ceil(threshold);
    const std::size_t first = start <= 0.0 ? 0 : static_cast<std::size_t>(start);
    CompensatedSum<double> acc;
    for (std::size_t m = first; m < pmf.size(); ++m) acc += pmf[m];
    return acc.value();
  }
};

namespace detail {

inline void check_x(std::uint64_t x, const SieveTable& sieve, const char* op) {
  if (x < 1 || x > sieve.x_max()) {
    throw invalid_argument(std::string(op) + ": x=" + std::to_string(x) + " outside [1, " +
                           std::to_string(sieve.x_max()) + "]");
  }
}

inline double real_weight(Complex v, std::uint64_t n) {
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())) || v.real() < 0.0 ||
      !std::isfinite(v.real())) {
    throw invalid_argument("weights must be real and nonnegative (n=" + std::to_string(n) + ")");
  }
  return v.real();
}

// Calls fn(n, alpha(n), g(n)) for n = 1..x with one factorisation per n.
template <typename Fn>
void for_each_weighted(const MultiplicativeSpec& alpha, const AdditiveSpec& g, std::uint64_t x,
                       const SieveTable& sieve, Fn&& fn) {
  for (std::uint64_t n = 1; n <= x; ++n) {
    Complex a = 1.0;
    Complex gv = 0.0;
    sieve.for_each_prime_power(n, [&](std::uint64_t p, unsigned k) {
      a *= alpha.value_at(p, k);
      gv += g.value_at(p, k);
    });
    fn(n, a, gv);
  }
}

// base^m for small nonnegative m from a table, anything else by ipow.
class PowerTable {
 public:
  explicit PowerTable(Complex base) : base_(base) {
    powers_.resize(kSize);
    powers_[0] = 1.0;
    for (std::size_t m = 1; m < kSize; ++m) powers_[m] = powers_[m - 1] * base;
  }

  Complex operator()(long long m) const {
    if (m >= 0 && m < static_cast<long long>(kSize)) return powers_[static_cast<std::size_t>(m)];
    return ipow(base_, m);
  }

 private:
  static constexpr std::size_t kSize = 72;
  Complex base_;
  std::vector<Complex> powers_;
};

}  // namespace detail

/// Exact sum_{n <= x} f(n), one factorisation per n, compensated.
inline Complex partial_sum(const MultiplicativeSpec& spec, std::uint64_t x,
                           const SieveTable& sieve) {
  detail::check_x(x, sieve, "partial_sum");
  CompensatedComplexSum<double> acc;
  for (std::uint64_t n = 1; n <= x; ++n) {
    Complex v = 1.0;
    sieve.for_each_prime_power(n, [&](std::uint64_t p, unsigned k) { v *= spec.value_at(p, k); });
    acc += v;
  }
  return acc.value();
}

/// sum_{n <= x} y_j^{g(n)} alpha(n) for every y_j in one pass. Integer-valued
/// g uses exact powers; otherwise the principal branch of log y.
inline std::vector<Complex> twisted_sums(const MultiplicativeSpec& alpha,
                                         std::span<const Complex> ys, const AdditiveSpec& g,
                                         std::uint64_t x, const SieveTable& sieve) {
  detail::check_x(x, sieve, "twisted_sum");
  std::vector<CompensatedComplexSum<double>> acc(ys.size());
  std::vector<detail::PowerTable> tables;
  std::vector<Complex> logs;
  for (const Complex y : ys) {
    require_finite(y, "twisted_sum");
    tables.emplace_back(y);
    logs.push_back(y == Complex(0.0, 0.0) ? Complex(0.0) : std::log(y));
  }
  detail::for_each_weighted(alpha, g, x, sieve, [&](std::uint64_t, Complex a, Complex gv) {
    if (g.integer_valued) {
      const long long m = detail::as_integer(gv);
      for (std::size_t j = 0; j < ys.size(); ++j) acc[j] += a * tables[j](m);
    } else {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (gv == Complex(0.0, 0.0)) {
          acc[j] += a;
        } else if (ys[j] == Complex(0.0, 0.0)) {
          // 0^g = 0 for g != 0
        } else {
          acc[j] += a * std::exp(gv * logs[j]);
        }
      }
    }
  });
  std::vector<Complex> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(a.value());
  return out;
}

inline Complex twisted_sum(const MultiplicativeSpec& alpha, Complex y, const AdditiveSpec& g,
                           std::uint64_t x, const SieveTable& sieve) {
  return twisted_sums(alpha, std::span<const Complex>(&y, 1), g, x, sieve).front();
}

/// E(e^{z_j g(N_{x,alpha})}) for every z_j: twisted sums at y = e^z over the
/// plain partial sum. Exponentials use z directly.
inline std::vector<Complex> mgf_exact_batch(const MultiplicativeSpec& alpha, const AdditiveSpec& g,
                                            std::uint64_t x, std::span<const Complex> zs,
                                            const SieveTable& sieve) {
  detail::check_x(x, sieve, "mgf_exact");
  CompensatedComplexSum<double> denom;
  std::vector<CompensatedComplexSum<double>> num(zs.size());
  std::vector<detail::PowerTable> tables;
  for (const Complex z : zs) {
    require_finite(z, "mgf_exact");
    tables.emplace_back(std::exp(z));
  }
  detail::for_each_weighted(alpha, g, x, sieve, [&](std::uint64_t, Complex a, Complex gv) {
    denom += a;
    if (g.integer_valued) {
      const long long m = detail::as_integer(gv);
      for (std::size_t j = 0; j < zs.size(); ++j) num[j] += a * tables[j](m);
    } else {
      for (std::size_t j = 0; j < zs.size(); ++j) num[j] += a * std::exp(zs[j] * gv);
    }
  });
  const Complex d = denom.value();
  if (d == Complex(0.0, 0.0)) {
    throw numeric_error(NumericErrorKind::degenerate, "mgf_exact: sum of weights is zero");
  }
  std::vector<Complex> out;
  out.reserve(zs.size());
  for (const auto& n : num) out.push_back(n.value() / d);
  return out;
}

inline Complex mgf_exact(const MultiplicativeSpec& alpha, const AdditiveSpec& g, std::uint64_t x,
                         Complex z, const SieveTable& sieve) {
  return mgf_exact_batch(alpha, g, x, std::span<const Complex>(&z, 1), sieve).front();
}

/// Exact pmf of g(N_{x,alpha}); weights bucketed by g(n) with compensation.
inline DistributionTable pmf(const MultiplicativeSpec& alpha, const AdditiveSpec& g,
                             std::uint64_t x, const SieveTable& sieve) {
  detail::check_x(x, sieve, "pmf");
  std::vector<CompensatedSum<double>> buckets;
  CompensatedSum<double> total;
  detail::for_each_weighted(alpha, g, x, sieve, [&](std::uint64_t n, Complex a, Complex gv) {
    const long long m = detail::as_integer(gv);
    if (m < 0) throw invalid_argument("pmf: additive function must be nonnegative");
    const double w = detail::real_weight(a, n);
    if (static_cast<std::size_t>(m) >= buckets.size()) buckets.resize(static_cast<std::size_t>(m) + 1);
    buckets[static_cast<std::size_t>(m)] += w;
    total += w;
  });
  const double t = total.value();
  if (!(t > 0.0)) throw numeric_error(NumericErrorKind::degenerate, "pmf: total weight is zero");

  DistributionTable out;
  out.x = x;
  out.pmf.reserve(buckets.size());
  CompensatedSum<double> mean;
  for (std::size_t m = 0; m < buckets.size(); ++m) {
    out.pmf.push_back(buckets[m].value() / t);
    mean += static_cast<double>(m) * out.pmf.back();
  }
  out.mean = mean.value();
  CompensatedSum<double> var;
  for (std::size_t m = 0; m < out.pmf.size(); ++m) {
    const double d = static_cast<double>(m) - out.mean;
    var += d * d * out.pmf[m];
  }
  out.variance = var.value();
  return out;
}

inline WeightTable build_weights(const MultiplicativeSpec& alpha, std::uint64_t x,
                                 const SieveTable& sieve) {
  detail::check_x(x, sieve, "build_weights");
  WeightTable t;
  t.x = x;
  t.weights.resize(x);
  t.cumulative.resize(x);
  long double running = 0.0L;  // nonnegative addends keep this monotone
  for (std::uint64_t n = 1; n <= x; ++n) {
    Complex v = 1.0;
    sieve.for_each_prime_power(n, [&](std::uint64_t p, unsigned k) { v *= alpha.value_at(p, k); });
    const double w = detail::real_weight(v, n);
    t.weights[n - 1] = w;
    running += w;
    t.cumulative[n - 1] = static_cast<double>(running);
  }
  if (!(t.total() > 0.0)) {
    throw numeric_error(NumericErrorKind::degenerate, "build_weights: total weight is zero");
  }
  return t;
}

/*!
  Counter-based SplitMix64 stream.

  Draw i of stream j is mix(key_j + (i + 1) * 0x9E3779B97F4A7C15) with
  key_j = mix(seed) ^ mix(j + 0x632BE59BD9B4E019) and mix the SplitMix64
  finaliser; uniforms take the top 53 bits. Any draw is computable on its own,
  so streams can be split across threads without changing results.
*/
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ull)) {}

  std::uint64_t bits(std::uint64_t index) const {
    return mix(key_ + (index + 1) * 0x9E3779B97F4A7C15ull);
  }

  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// iid draws of N_{x,alpha} by binary search on the cumulative weights.
inline std::vector<std::uint64_t> sample(const WeightTable& table, std::uint64_t seed,
                                         std::size_t count, std::uint64_t stream = 0) {
  const CounterRng rng(seed, stream);
  const double total = table.total();
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double target = rng.uniform(i) * total;
    auto it = std::upper_bound(table.cumulative.begin(), table.cumulative.end(), target);
    if (it == table.cumulative.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - table.cumulative.begin()) + 1);
  }
  return out;
}

inline std::vector<std::uint64_t> sample(const MultiplicativeSpec& alpha, std::uint64_t x,
                                         std::uint64_t seed, std::size_t count,
                                         const SieveTable& sieve) {
  return sample(build_weights(alpha, x, sieve), seed, count);
}

inline double ln_ln(std::uint64_t x) { return std::log(std::log(static_cast<double>(x))); }

/// psi_x(z) = exp(-rho ln ln x (e^z - 1)) E(e^{z g(N_{x,alpha})}) for each z.
inline std::vector<Complex> mod_poisson_residual_batch(const MultiplicativeSpec& alpha,
                                                       const AdditiveSpec& g, std::uint64_t x,
                                                       std::span<const Complex> zs, Complex rho,
                                                       const SieveTable& sieve) {
  if (x < 3) throw invalid_argument("mod_poisson_residual: requires x >= 3");
  require_finite(rho, "mod_poisson_residual");
  const auto mgf = mgf_exact_batch(alpha, g, x, zs, sieve);
  const double t = ln_ln(x);
  std::vector<Complex> out;
  out.reserve(zs.size());
  for (std::size_t j = 0; j < zs.size(); ++j) {
    out.push_back(std::exp(-rho * t * (std::exp(zs[j]) - 1.0)) * mgf[j]);
  }
  return out;
}

inline Complex mod_poisson_residual(const MultiplicativeSpec& alpha, const AdditiveSpec& g,
                                    std::uint64_t x, Complex z, Complex rho,
                                    const SieveTable& sieve) {
  return mod_poisson_residual_batch(alpha, g, x, std::span<const Complex>(&z, 1), rho, sieve)
      .front();
}

}  // namespace sd
