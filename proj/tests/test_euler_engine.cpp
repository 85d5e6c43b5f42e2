#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "sd/euler.hpp"
#include "sd/exact_sums.hpp"

namespace {

using sd::Complex;
using std::numbers::pi;

const double kSixOverPiSq = 6.0 / (pi * pi);
const double kNinetyOverPi4 = 90.0 / std::pow(pi, 4);

// alpha(p^k) = B^k with a growth bound that admits B = 2 (outside geometric_B's domain).
sd::MultiplicativeSpec raw_geometric(double B) {
  sd::MultiplicativeSpec s;
  s.name = "raw_geometric";
  s.value_at = [B](std::uint64_t, unsigned k) { return Complex(std::pow(B, k)); };
  s.rho = B;
  s.growth = {1.0, B};
  s.excess = sd::PrimeExcess::zero();
  return s;
}

const sd::EulerEngine& engine() {
  static const sd::EulerEngine e(1000000);
  return e;
}

TEST(LocalFactor, Examples) {
  EXPECT_NEAR(sd::local_factor(sd::unit(), 2, 2.0).real(), 1.0 / 3.0, 1e-14);
  for (const double B : {0.5, 1.5}) {
    for (const std::uint64_t p : {2, 3, 7}) {
      for (const Complex s : {Complex(1.0), Complex(2.0, 1.0)}) {
        const Complex ps = std::exp(s * std::log(static_cast<double>(p)));
        const Complex expected = B / (ps - B);
        EXPECT_LE(std::abs(sd::local_factor(sd::geometric_B(B), p, s) - expected), 1e-13);
      }
    }
  }
  for (const double theta : {0.5, 2.0, 3.0}) {
    EXPECT_NEAR(sd::local_factor(sd::theta_omega(theta), 3, 2.0).real(), theta / 8.0, 1e-14);
  }
}

TEST(LocalFactor, DivergenceAndPole) {
  try {
    sd::local_factor(sd::geometric_B(1.5), 2, 0.5);
    ADD_FAILURE();
  } catch (const sd::numeric_error& e) {
    EXPECT_EQ(e.kind(), sd::NumericErrorKind::divergent);
    EXPECT_EQ(e.prime(), 2u);
  }
  try {
    sd::local_factor(raw_geometric(2.0), 2, 1.0);
    ADD_FAILURE();
  } catch (const sd::numeric_error& e) {
    EXPECT_EQ(e.kind(), sd::NumericErrorKind::pole);
    EXPECT_EQ(e.prime(), 2u);
  }
}

TEST(LocalFactor, TruncationMeetsTolerance) {
  // Slow geometric decay at p = 2: q = 1.9/2.
  const auto spec = raw_geometric(1.9);
  const Complex exact = 1.9 / (2.0 - 1.9);
  EXPECT_LE(std::abs(sd::local_factor(spec, 2, 1.0, 1e-12) - exact), 1e-11);
}

TEST(Lambda0, Examples) {
  const auto u = engine().lambda0(sd::unit());
  EXPECT_NEAR(u.value.real(), 1.0, 1e-9);
  EXPECT_TRUE(u.certified);

  const auto t = engine().lambda0(sd::theta_omega(2.0));
  EXPECT_NEAR(t.value.real(), kSixOverPiSq, 1e-6);
  EXPECT_LE(std::abs(t.value.imag()), 1e-15);
  EXPECT_EQ(t.prime_cutoff, 1000000u);
  EXPECT_GT(t.k_cutoff, 0u);
  EXPECT_TRUE(std::isfinite(t.tail_estimate));
  EXPECT_GE(t.tail_estimate, 0.0);

  for (const double rho : {0.0, -1.0, -3.0}) {
    auto spec = sd::tabulated("neg", {}, 1.0, rho);
    EXPECT_EQ(engine().lambda0(spec).value, Complex(0.0)) << rho;
  }
}

TEST(Lambda0, EulerPhiOverN) {
  // prod (1 - 1/p)(1 + 1/p) = 1/zeta(2).
  EXPECT_NEAR(engine().lambda0(sd::euler_phi_over_n()).value.real(), kSixOverPiSq, 1e-6);
}

TEST(Lambda0, ThetaClosedFormConsistency) {
  const sd::EulerEngine e(100000);
  for (const double theta : {0.5, 2.0, 2.5}) {
    double log_prod = 0.0;
    for (const auto p : sd::primes_up_to(100000)) {
      const double pd = static_cast<double>(p);
      log_prod += theta * std::log1p(-1.0 / pd) + std::log1p(theta / (pd - 1.0));
    }
    const double expected = std::exp(log_prod) / std::tgamma(theta);
    EXPECT_NEAR(e.lambda0(sd::theta_omega(theta)).value.real(), expected, 1e-12 * expected);
  }
}

TEST(Lambda0, StabilizesWithinTailEstimate) {
  const sd::EulerEngine small(10000);
  const std::vector<sd::MultiplicativeSpec> specs = {
      sd::unit(), sd::theta_omega(2.0), sd::theta_omega(0.5), sd::geometric_B(1.5),
      sd::perturbed_power(1.0, 0.5), sd::tau_rho(2.0), sd::euler_phi_over_n()};
  for (const auto& spec : specs) {
    const auto a = small.lambda0(spec);
    const auto b = engine().lambda0(spec);
    EXPECT_LE(std::abs(b.value - a.value), a.tail_estimate * std::max(1.0, std::abs(a.value)))
        << spec.name;
    EXPECT_LE(b.tail_estimate, a.tail_estimate) << spec.name;
  }
}

TEST(Lambda0, Preconditions) {
  EXPECT_THROW(sd::lambda0(sd::unit(), 50), sd::invalid_argument);
  EXPECT_THROW(engine().lambda0(raw_geometric(2.0)), sd::invalid_argument);
}

TEST(Lambda0, BitStable) {
  const auto a = engine().lambda0(sd::geometric_B(1.5));
  const auto b = engine().lambda0(sd::geometric_B(1.5));
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.tail_estimate, b.tail_estimate);
}

TEST(Psi, Examples) {
  for (const auto& alpha : {sd::unit(), sd::theta_omega(0.5), sd::geometric_B(1.5)}) {
    EXPECT_NEAR(std::abs(engine().psi(alpha, 0.0, sd::omega_spec()) - 1.0), 0.0, 1e-14);
  }
  EXPECT_NEAR(engine().psi(sd::unit(), std::log(2.0), sd::omega_spec()).real(), kSixOverPiSq, 1e-6);
  EXPECT_EQ(engine().psi(sd::unit(), Complex(0.0, pi), sd::omega_spec()), Complex(0.0));
}

TEST(Psi, ConjugateSymmetry) {
  const std::vector<Complex> zs = {{0.3, 0.7}, {-0.5, 2.0}, {0.9, -0.4}};
  for (const auto& alpha : {sd::unit(), sd::theta_omega(2.0), sd::euler_phi_over_n()}) {
    for (const Complex z : zs) {
      const Complex a = engine().psi(alpha, z, sd::omega_spec());
      const Complex b = engine().psi(alpha, std::conj(z), sd::omega_spec());
      EXPECT_LE(std::abs(a - std::conj(b)), 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(Psi, GridMatchesPointwise) {
  const std::vector<Complex> zs = {{0.1, 0.0}, {0.0, 1.0}, {-0.7, 0.2}};
  const auto grid = engine().psi_grid(sd::unit(), zs, sd::big_omega_spec());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    EXPECT_EQ(grid[i], engine().psi(sd::unit(), zs[i], sd::big_omega_spec()));
  }
}

TEST(Psi, DegenerateAlpha) {
  try {
    engine().psi(sd::theta_omega(-1.0), 0.5, sd::omega_spec());
    ADD_FAILURE();
  } catch (const sd::numeric_error& e) {
    EXPECT_EQ(e.kind(), sd::NumericErrorKind::degenerate);
  }
}

TEST(GCompensated, Examples) {
  EXPECT_NEAR(std::abs(engine().g_compensated(sd::unit(), 2.0, 1.0).value - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(engine().g_compensated(sd::theta_omega(2.0), 2.0, 2.0).value.real(), kNinetyOverPi4,
              1e-8);
  for (const double rho : {0.5, 2.0, 3.0}) {
    EXPECT_NEAR(std::abs(engine().g_compensated(sd::tau_rho(rho), 2.0, rho).value - 1.0), 0.0, 1e-8)
        << rho;
  }
}

TEST(GCompensated, MatchesDirichletPartialSums) {
  constexpr std::uint64_t N = 1000000;
  const auto sieve = sd::build_sieve(N);
  for (const double s : {2.0, 3.0}) {
    for (const auto& [spec, rho] :
         std::vector<std::pair<sd::MultiplicativeSpec, double>>{{sd::theta_omega(2.0), 2.0},
                                                                {sd::unit(), 1.0},
                                                                {sd::geometric_B(1.5), 1.5}}) {
      double sum = 0.0;
      double comp = 0.0;
      for (std::uint64_t n = 1; n <= N; ++n) {
        const double term = sd::eval(spec, n, sieve).real() * std::pow(static_cast<double>(n), -s);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      }
      const double zeta_s = sd::zeta(s).real();
      const double direct = std::pow(zeta_s, -rho) * sum;
      // Coefficients are O(d_3(n)) here; the Dirichlet tail beyond N is below
      // (ln N)^2 N^{1-s} / (s - 1).
      const double lnN = std::log(static_cast<double>(N));
      const double tail = std::pow(zeta_s, -rho) * lnN * lnN * std::pow(N, 1.0 - s) / (s - 1.0);
      const auto g = engine().g_compensated(spec, s, rho);
      EXPECT_LE(std::abs(g.value.real() - direct), tail) << spec.name << " s=" << s;
      EXPECT_GE(g.value.real(), direct - 1e-12) << spec.name;
    }
  }
}

TEST(GCompensated, DomainAndPole) {
  try {
    engine().g_compensated(sd::unit(), 0.7, 1.0);
    ADD_FAILURE();
  } catch (const sd::numeric_error& e) {
    EXPECT_EQ(e.kind(), sd::NumericErrorKind::domain);
  }
  // Best-effort strip 1 - c0 < Re s <= 1 is allowed but uncertified.
  const auto r = engine().g_compensated(sd::unit(), 0.9, 1.0);
  EXPECT_FALSE(r.certified);
  EXPECT_TRUE(sd::is_finite(r.value));

  auto spec = raw_geometric(2.0);
  try {
    sd::EulerEngine(1000).g_compensated(spec, 1.0, 2.0);
    ADD_FAILURE();
  } catch (const sd::numeric_error& e) {
    EXPECT_EQ(e.kind(), sd::NumericErrorKind::pole);
    EXPECT_EQ(e.prime(), 2u);
  }
}

TEST(Admissibility, Examples) {
  const auto u = sd::check_admissibility_pp(sd::unit(), 0.4);
  EXPECT_EQ(u.verdict, sd::Verdict::consistent);
  EXPECT_LT(u.decay_exponent, -0.1);
  EXPECT_TRUE(std::isfinite(u.abscissa_estimate));

  EXPECT_EQ(sd::check_admissibility_pp(sd::geometric_B(1.5), 0.25).verdict,
            sd::Verdict::consistent);
  const auto bad = sd::check_admissibility_pp(sd::geometric_B(1.9), 0.1);
  EXPECT_EQ(bad.verdict, sd::Verdict::inconsistent);
  ASSERT_TRUE(bad.witness_prime.has_value());
  EXPECT_EQ(*bad.witness_prime, 2u);
}

TEST(Admissibility, ThetaScalesQuadratically) {
  const auto u = sd::check_admissibility_pp(sd::unit(), 0.4);
  for (const double theta : {0.5, 2.0, 3.0}) {
    const auto t = sd::check_admissibility_pp(sd::theta_omega(theta), 0.4);
    EXPECT_EQ(t.verdict, sd::Verdict::consistent);
    ASSERT_EQ(t.square_sum_partials.size(), u.square_sum_partials.size());
    for (std::size_t i = 0; i < u.square_sum_partials.size(); ++i) {
      EXPECT_NEAR(t.square_sum_partials[i].second, theta * theta * u.square_sum_partials[i].second,
                  1e-12 * t.square_sum_partials[i].second);
    }
  }
}

TEST(Admissibility, PartialsNondecreasing) {
  for (const auto& spec : {sd::unit(), sd::geometric_B(1.5), sd::perturbed_power(1.0, 0.5)}) {
    const auto r = sd::check_admissibility_pp(spec, 0.25, {10, 100, 1000, 10000, 100000});
    for (std::size_t i = 1; i < r.square_sum_partials.size(); ++i) {
      EXPECT_GE(r.square_sum_partials[i].second, r.square_sum_partials[i - 1].second);
    }
  }
  EXPECT_THROW(sd::check_admissibility_pp(sd::unit(), 1.0), sd::invalid_argument);
  EXPECT_THROW(sd::check_admissibility_pp(sd::unit(), 0.3, {}), sd::invalid_argument);
}

}  // namespace
