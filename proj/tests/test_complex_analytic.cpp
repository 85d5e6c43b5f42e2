#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "sd/complex_math.hpp"
#include "sd/sieve.hpp"

namespace {

using sd::Complex;
using std::numbers::pi;

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

TEST(Gamma, Examples) {
  EXPECT_LE(rel_err(sd::gamma(1.0), 1.0), 1e-13);
  EXPECT_LE(rel_err(sd::gamma(5.0), 24.0), 1e-13);
  EXPECT_LE(rel_err(sd::gamma(0.5), std::sqrt(pi)), 1e-13);
}

TEST(Gamma, ReferenceValues) {
  // 30-digit reference values.
  struct Case {
    Complex z, expected;
  };
  const Case cases[] = {
      {{2.5, 1.5}, {0.30993622584074135331, 0.73408427362148133942}},
      {{-3.7, 0.2}, {0.1937597216115616782, -0.018836662733468159573}},
      {{10.0, -20.0}, {-0.13371397782847203152, -0.12367497527124524959}},
      {{0.1, 0.1}, {4.520080204891074599, -4.9173130691424630198}},
      {{30.0, 5.0}, {-1.8949185447519360743e+30, -5.4813832361679508712e+30}},
      {{-12.5, 0.0}, {-1.8366064838592809156e-9, 0.0}},
  };
  for (const auto& c : cases) EXPECT_LE(rel_err(sd::gamma(c.z), c.expected), 1e-10) << c.z;
}

TEST(Gamma, Poles) {
  for (const double n : {0.0, -1.0, -2.0, -17.0}) {
    try {
      sd::gamma(n);
      ADD_FAILURE() << "no pole error at " << n;
    } catch (const sd::numeric_error& e) {
      EXPECT_EQ(e.kind(), sd::NumericErrorKind::pole);
    }
    EXPECT_EQ(sd::rgamma(n), Complex(0.0));
  }
  EXPECT_THROW(sd::gamma(Complex(NAN, 0.0)), sd::invalid_argument);
}

TEST(Gamma, Recurrence) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  int done = 0;
  while (done < 100) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) > 10.0 || std::abs(z.imag()) < 1e-3) continue;
    ++done;
    EXPECT_LE(rel_err(sd::gamma(z + 1.0), z * sd::gamma(z)), 1e-9) << z;
  }
}

TEST(Gamma, RgammaIsReciprocal) {
  for (const Complex z : {Complex(0.3, 0.0), Complex(-2.5, 0.1), Complex(7.0, 3.0)}) {
    EXPECT_LE(std::abs(sd::rgamma(z) * sd::gamma(z) - 1.0), 1e-12);
  }
}

TEST(Zeta, Examples) {
  EXPECT_LE(rel_err(sd::zeta(2.0), pi * pi / 6.0), 1e-13);
  EXPECT_LE(rel_err(sd::zeta(4.0), std::pow(pi, 4) / 90.0), 1e-13);
  EXPECT_EQ(sd::zeta(Complex(2.0, 0.0)).imag(), 0.0);
}

TEST(Zeta, ReferenceValues) {
  struct Case {
    Complex s, expected;
  };
  const Case cases[] = {
      {{1.5, 0.0}, {2.6123753486854883433, 0.0}},
      {{2.0, 3.0}, {0.79802198514627572062, -0.11374430805293850022}},
      {{1.1, 25.0}, {0.54194551324705091585, 0.13776799980060573931}},
      {{3.0, -7.0}, {1.0142003689711159321, -0.096125395858022432498}},
  };
  for (const auto& c : cases) EXPECT_LE(rel_err(sd::zeta(c.s), c.expected), 1e-10) << c.s;
}

TEST(Zeta, Domain) {
  for (const Complex s : {Complex(1.0, 0.0), Complex(0.5, 14.0), Complex(-3.0, 0.0)}) {
    try {
      sd::zeta(s);
      ADD_FAILURE() << "no domain error at " << s;
    } catch (const sd::numeric_error& e) {
      EXPECT_EQ(e.kind(), sd::NumericErrorKind::domain);
    }
  }
}

TEST(Zeta, MatchesTruncatedEulerProduct) {
  const auto primes = sd::primes_up_to(1000000);
  for (const double s : {2.0, 3.0, 4.0}) {
    double log_prod = 0.0;
    for (const auto p : primes) log_prod -= std::log1p(-std::pow(static_cast<double>(p), -s));
    EXPECT_LE(rel_err(sd::zeta(s), std::exp(log_prod)), 1e-6) << s;
  }
}

TEST(Cpow, Examples) {
  for (const Complex x : {Complex(2.0), Complex(-3.0, 1.0), Complex(0.1, -0.2)}) {
    EXPECT_EQ(sd::cpow(x, 0.0), Complex(1.0));
  }
  EXPECT_EQ(sd::cpow(-4.0, 0.0), Complex(1.0));
  EXPECT_LE(std::abs(sd::cpow(std::numbers::e, Complex(0.0, pi / 2.0)) - Complex(0.0, 1.0)), 1e-14);
}

TEST(Cpow, BranchCut) {
  for (const Complex b : {Complex(0.0), Complex(-1.0), Complex(-2.5, 0.0)}) {
    try {
      sd::cpow(b, 0.5);
      ADD_FAILURE();
    } catch (const sd::numeric_error& e) {
      EXPECT_EQ(e.kind(), sd::NumericErrorKind::domain);
    }
  }
  // Just off the cut the principal branch applies.
  EXPECT_GT(sd::cpow(Complex(-1.0, 1e-300), 0.5).imag(), 0.0);
}

TEST(Clog1p, Examples) {
  EXPECT_EQ(sd::clog1p(0.0), Complex(0.0));
  EXPECT_THROW(sd::clog1p(-1.0), sd::numeric_error);
  EXPECT_THROW(sd::clog1p(-3.0), sd::numeric_error);
}

TEST(Clog1p, SmallArgumentsKeepRelativeAccuracy) {
  const Complex a(1e-20, -3e-21);
  EXPECT_LE(std::abs(sd::clog1p(a) - a) / std::abs(a), 1e-15);
  const Complex b(-1e-9, 2e-9);
  const Complex series = b - b * b / 2.0 + b * b * b / 3.0;
  EXPECT_LE(std::abs(sd::clog1p(b) - series) / std::abs(b), 1e-15);
}

TEST(Clog1p, ExpInverts) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const Complex a(u(rng), u(rng));
    if (std::abs(a) > 0.5) continue;
    EXPECT_LE(std::abs(std::exp(sd::clog1p(a)) - (1.0 + a)), 1e-13) << a;
  }
}

}  // namespace
