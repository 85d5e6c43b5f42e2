#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "sd/limit_stats.hpp"

namespace {

using sd::Complex;

class LimitStats : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    sieve_ = new sd::SieveTable(sd::build_sieve(1000000));
    engine_ = new sd::EulerEngine(1000000);
  }
  static void TearDownTestSuite() {
    delete sieve_;
    delete engine_;
  }
  static const sd::SieveTable& sieve() { return *sieve_; }
  static const sd::EulerEngine& engine() { return *engine_; }

 private:
  static inline sd::SieveTable* sieve_ = nullptr;
  static inline sd::EulerEngine* engine_ = nullptr;
};

TEST(Eta, Examples) {
  EXPECT_EQ(sd::eta(0.0), Complex(0.0));
  EXPECT_EQ(sd::eta_prime(0.0), Complex(1.0));
  EXPECT_EQ(sd::eta_second(0.0), Complex(1.0));
  EXPECT_NEAR(std::abs(sd::eta(std::log(2.0)) - 1.0), 0.0, 1e-15);
}

TEST(EtaStar, Examples) {
  EXPECT_EQ(sd::eta_star(1.0), 0.0);
  EXPECT_NEAR(sd::eta_star(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(sd::eta_star(2.0), oracle::eta_star_numeric(2.0), 1e-10);
  EXPECT_NEAR(sd::eta_star(2.0), 0.3862943611198906, 1e-15);
  EXPECT_THROW(sd::eta_star(0.0), sd::invalid_argument);
  EXPECT_THROW(sd::eta_star(-1.0), sd::invalid_argument);
}

TEST(EtaStar, MatchesNumericSupremum) {
  for (const double s : {0.05, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, std::numbers::e, 5.0, 10.0, 100.0}) {
    EXPECT_NEAR(sd::eta_star(s), oracle::eta_star_numeric(s), 1e-10) << s;
  }
}

TEST(EtaStar, Convexity) {
  const std::vector<double> grid = {0.1, 0.3, 0.7, 1.0, 1.5, 2.0, 4.0, 9.0};
  for (const double a : grid) {
    for (const double b : grid) {
      for (const double lam : {0.1, 0.25, 0.5, 0.9}) {
        EXPECT_LE(sd::eta_star(lam * a + (1 - lam) * b),
                  lam * sd::eta_star(a) + (1 - lam) * sd::eta_star(b) + 1e-14);
      }
    }
  }
}

TEST(EtaStar, LegendreIdentityAtTilt) {
  for (const double s : {0.2, 0.5, 1.0, 1.7, 3.0, 12.0}) {
    const double h = std::log(s);
    EXPECT_NEAR(sd::eta_star(s), s * h - sd::eta(h).real(), 1e-12);
    EXPECT_NEAR(sd::eta_prime(h).real(), s, 1e-12 * s);
  }
}

TEST(NormalCdf, Examples) {
  EXPECT_EQ(sd::normal_cdf(0.0), 0.5);
  for (const double t : {0.5, 1.0, 2.0}) EXPECT_NEAR(sd::normal_cdf(t) + sd::normal_cdf(-t), 1.0, 1e-15);
  const double root = oracle::bisect([](double t) { return sd::normal_cdf(t) - 0.975; }, 0.0, 5.0);
  EXPECT_NEAR(root, 1.959963985, 1e-9);
  EXPECT_NEAR(sd::normal_cdf(1.959963985), 0.975, 1e-9);
  // Far tail keeps relative accuracy.
  EXPECT_NEAR(sd::normal_cdf(-10.0) / 7.619853024160526e-24, 1.0, 1e-12);
}

TEST_F(LimitStats, PsiDerivativeAtZeroMatchesExpansion) {
  // psi(z) for theta_omega-type twists of unit: psi(z) = lambda0(theta_omega(e^z)).
  // Cross-check the Richardson derivative against a wide-step central difference.
  const double d = sd::psi_derivative_at_zero(engine(), sd::unit(), sd::omega_spec());
  const double h = 1e-3;
  const double wide = (engine().psi(sd::unit(), h, sd::omega_spec()).real() -
                       engine().psi(sd::unit(), -h, sd::omega_spec()).real()) /
                      (2 * h);
  EXPECT_NEAR(d, wide, 1e-6);
  EXPECT_TRUE(std::isfinite(d));
}

TEST_F(LimitStats, LdpLiteralModeAtSEqualOne) {
  const auto d = sd::pmf(sd::unit(), sd::omega_spec(), 100000, sieve());
  const auto p = sd::ldp_predict(engine(), sd::unit(), sd::omega_spec(), 1.0, d, 1.0,
                                 sd::LdpMode::literal);
  EXPECT_EQ(p.rate, 0.0);
  EXPECT_EQ(p.h, 0.0);
  ASSERT_TRUE(p.warning.has_value());
  const double deriv = sd::psi_derivative_at_zero(engine(), sd::unit(), sd::omega_spec());
  EXPECT_DOUBLE_EQ(p.predicted_tail, deriv);  // exp(0) * psi'(0)
  EXPECT_THROW(sd::ldp_predict(engine(), sd::unit(), sd::omega_spec(), 1.0, d, 1.0,
                               sd::LdpMode::strict),
               sd::invalid_argument);
}

TEST_F(LimitStats, LdpPredictionFields) {
  const auto d = sd::pmf(sd::unit(), sd::omega_spec(), 1000000, sieve());
  const auto p = sd::ldp_predict(engine(), sd::unit(), sd::omega_spec(), 1.0, d, 2.0);
  EXPECT_EQ(p.s, 2.0);
  EXPECT_NEAR(p.h, std::log(2.0), 1e-15);
  EXPECT_NEAR(p.rate, 1.0 + 2.0 * (std::log(2.0) - 1.0), 1e-15);
  EXPECT_GT(p.rate, 0.0);
  const double t = std::log(std::log(1e6));
  const double expected = std::exp(-t * p.rate) * (6.0 / (std::numbers::pi * std::numbers::pi)) / 0.5;
  EXPECT_NEAR(p.predicted_tail, expected, 1e-6 * expected);
  EXPECT_NEAR(p.exact_tail, d.tail_at_least(2.0 * t), 0.0);
  EXPECT_NEAR(p.ratio, p.exact_tail / p.predicted_tail, 1e-15);
  EXPECT_FALSE(p.warning.has_value());
}

TEST_F(LimitStats, LdpPreconditions) {
  const auto d = sd::pmf(sd::unit(), sd::big_omega_spec(), 100000, sieve());
  EXPECT_THROW(sd::ldp_predict(engine(), sd::unit(), sd::big_omega_spec(), 1.0, d, 0.0),
               sd::invalid_argument);
  // Omega twists are restricted to s < sqrt 2.
  EXPECT_THROW(sd::ldp_predict(engine(), sd::unit(), sd::big_omega_spec(), 1.0, d, 1.5),
               sd::invalid_argument);
  EXPECT_NO_THROW(sd::ldp_predict(engine(), sd::unit(), sd::big_omega_spec(), 1.0, d, 1.3));
  EXPECT_THROW(sd::ldp_predict(sd::unit(), sd::omega_spec(), 1.0, 15, 2.0, sieve()),
               sd::invalid_argument);
  EXPECT_THROW(sd::ldp_predict(engine(), sd::unit(), sd::omega_spec(), -1.0, d, 2.0),
               sd::invalid_argument);
}

TEST_F(LimitStats, CltReportBasics) {
  const std::vector<double> ys = {-10.0, -1.0, 0.0, 1.0, 2.0};
  const auto r = sd::clt_report(sd::unit(), sd::omega_spec(), 1.0, 100000, ys, sieve());
  EXPECT_EQ(r.x, 100000u);
  ASSERT_EQ(r.tail_pairs.size(), ys.size());
  EXPECT_NEAR(r.tail_pairs[0].exact, 1.0, 1e-12);
  EXPECT_NEAR(r.tail_pairs[0].normal, 1.0, 1e-15);
  for (const auto& tp : r.tail_pairs) {
    EXPECT_GE(tp.exact, 0.0);
    EXPECT_LE(tp.exact, 1.0);
    EXPECT_GE(tp.normal, 0.0);
    EXPECT_LE(tp.normal, 1.0);
  }
  EXPECT_GE(r.kolmogorov_distance, 0.0);
  EXPECT_LE(r.kolmogorov_distance, 1.0);
  EXPECT_THROW(sd::clt_report(sd::unit(), sd::omega_spec(), 0.0, 100000, ys, sieve()),
               sd::invalid_argument);
  EXPECT_THROW(sd::clt_report(sd::unit(), sd::omega_spec(), 1.0, 10, ys, sieve()),
               sd::invalid_argument);
}

TEST_F(LimitStats, KolmogorovDistanceAgainstBruteForce) {
  const std::uint64_t x = 5000;
  const auto r = sd::clt_report(sd::unit(), sd::omega_spec(), 1.0, x, {}, sieve());
  const double t = std::log(std::log(static_cast<double>(x)));
  std::vector<double> values;
  for (std::uint64_t n = 1; n <= x; ++n) values.push_back((oracle::omega(n) - t) / std::sqrt(t));
  std::sort(values.begin(), values.end());
  double dmax = 0.0;
  const double N = static_cast<double>(x);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double phi = sd::normal_cdf(values[i]);
    dmax = std::max({dmax, std::abs((i + 1) / N - phi), std::abs(i / N - phi)});
  }
  EXPECT_NEAR(r.kolmogorov_distance, dmax, 1e-12);
}

TEST_F(LimitStats, MeanOverLogLogTrendsTowardOne) {
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const std::uint64_t x : {1000, 10000, 100000, 1000000}) {
    const auto d = sd::pmf(sd::unit(), sd::omega_spec(), x, sieve());
    const double gap = std::abs(d.mean / std::log(std::log(static_cast<double>(x))) - 1.0);
    EXPECT_LT(gap, prev_gap) << x;
    prev_gap = gap;
  }
}

TEST_F(LimitStats, MeanOffsetTrendsTowardMertensConstant) {
  // E omega(N) = ln ln x + B1 + O(1/ln x) under the counting measure.
  constexpr double kMertensB1 = 0.2614972128476428;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const std::uint64_t x : {1000, 10000, 100000, 1000000}) {
    const auto r = sd::clt_report(sd::unit(), sd::omega_spec(), 1.0, x, {}, sieve());
    const double t = std::log(std::log(static_cast<double>(x)));
    const double gap = std::abs(r.standardized_mean * std::sqrt(t) - kMertensB1);
    EXPECT_LT(gap, prev_gap) << x;
    EXPECT_LT(gap, 1.0 / std::log(static_cast<double>(x))) << x;
    prev_gap = gap;
  }
}

TEST_F(LimitStats, StandardizedVarianceTrendsTowardOne) {
  double prev = std::numeric_limits<double>::infinity();
  for (const std::uint64_t x : {1000, 10000, 100000, 1000000}) {
    const auto r = sd::clt_report(sd::unit(), sd::omega_spec(), 1.0, x, {}, sieve());
    EXPECT_LT(std::abs(r.standardized_variance - 1.0), prev) << x;
    prev = std::abs(r.standardized_variance - 1.0);
  }
}

}  // namespace
