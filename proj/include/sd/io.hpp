#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sd/euler.hpp"
#include "sd/exact_sums.hpp"
#include "sd/limit_stats.hpp"

namespace sd {

/// 15 significant digits, the precision of every number the CLI prints.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// v rounded to 15 significant digits, so JSON dumps stay within that precision.
inline double round15(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

inline nlohmann::json complex_json(Complex z) {
  return {{"re", round15(z.real())}, {"im", round15(z.imag())}};
}

// CSV "value,probability".
inline void write_distribution_csv(std::ostream& os, const DistributionTable& t) {
  os << "value,probability\n";
  for (std::size_t m = 0; m < t.pmf.size(); ++m) {
    os << m << ',' << format_number(t.pmf[m]) << '\n';
  }
}

// CSV "x,sum_re,sum_im".
inline void write_sums_csv(std::ostream& os,
                           const std::vector<std::pair<std::uint64_t, Complex>>& sums) {
  os << "x,sum_re,sum_im\n";
  for (const auto& [x, s] : sums) {
    os << x << ',' << format_number(s.real()) << ',' << format_number(s.imag()) << '\n';
  }
}

// CSV "y,exact,predicted" with predicted = 1 - Phi(y).
inline void write_clt_csv(std::ostream& os, const CltReport& r) {
  os << "y,exact,predicted\n";
  for (const auto& p : r.tail_pairs) {
    os << format_number(p.y) << ',' << format_number(p.exact) << ',' << format_number(p.normal)
       << '\n';
  }
}

// CSV "s,exact,predicted".
inline void write_ldp_csv(std::ostream& os, const std::vector<LdpPrediction>& rows) {
  os << "s,exact,predicted\n";
  for (const auto& p : rows) {
    os << format_number(p.s) << ',' << format_number(p.exact_tail) << ','
       << format_number(p.predicted_tail) << '\n';
  }
}

inline nlohmann::json to_json(const EulerProductResult& r) {
  return {{"value", complex_json(r.value)},
          {"prime_cutoff", r.prime_cutoff},
          {"k_cutoff", r.k_cutoff},
          {"tail_estimate", round15(r.tail_estimate)},
          {"certified", r.certified}};
}

inline nlohmann::json to_json(const DistributionTable& t) {
  nlohmann::json pmf = nlohmann::json::array();
  for (std::size_t m = 0; m < t.pmf.size(); ++m) {
    pmf.push_back({{"value", m}, {"probability", round15(t.pmf[m])}});
  }
  return {{"x", t.x}, {"pmf", pmf}, {"mean", round15(t.mean)}, {"variance", round15(t.variance)}};
}

inline nlohmann::json to_json(const LdpPrediction& p) {
  nlohmann::json j = {{"s", round15(p.s)},
                      {"h", round15(p.h)},
                      {"rate", round15(p.rate)},
                      {"predicted_tail", round15(p.predicted_tail)},
                      {"exact_tail", round15(p.exact_tail)},
                      {"ratio", round15(p.ratio)}};
  if (p.warning) j["warning"] = *p.warning;
  return j;
}

inline nlohmann::json to_json(const CltReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.tail_pairs) {
    pairs.push_back({{"y", round15(p.y)}, {"exact", round15(p.exact)}, {"normal", round15(p.normal)}});
  }
  return {{"x", r.x},
          {"kolmogorov_distance", round15(r.kolmogorov_distance)},
          {"tail_pairs", pairs},
          {"standardized_mean", round15(r.standardized_mean)},
          {"standardized_variance", round15(r.standardized_variance)}};
}

inline nlohmann::json to_json(const AdmissibilityReport& r) {
  nlohmann::json partials = nlohmann::json::array();
  for (const auto& [P, v] : r.square_sum_partials) partials.push_back({{"P", P}, {"sum", round15(v)}});
  nlohmann::json j = {{"abscissa_estimate", std::isnan(r.abscissa_estimate)
                                                ? nlohmann::json(nullptr)
                                                : nlohmann::json(round15(r.abscissa_estimate))},
                      {"square_sum_partials", partials},
                      {"decay_exponent", std::isfinite(r.decay_exponent)
                                             ? nlohmann::json(round15(r.decay_exponent))
                                             : nlohmann::json(nullptr)},
                      {"verdict", to_string(r.verdict)}};
  j["witness_prime"] = r.witness_prime ? nlohmann::json(*r.witness_prime) : nlohmann::json(nullptr);
  return j;
}

}  // namespace sd
