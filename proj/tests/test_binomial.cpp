#include <cmath>

#include <gtest/gtest.h>

#include "stoken/binomial.hpp"
#include "stoken/errors.hpp"
#include "stoken/rng.hpp"

using namespace stoken;

namespace {

// Direct long-double summation with a multiplicative pmf recurrence.
long double exact_cdf(int n, int k, long double q) {
  if (k < 0) return 0.0L;
  if (k >= n) return 1.0L;
  long double pmf = std::pow(1.0L - q, static_cast<long double>(n));
  long double acc = pmf;
  for (int i = 1; i <= k; ++i) {
    pmf *= (n - i + 1) / static_cast<long double>(i) * q / (1.0L - q);
    acc += pmf;
  }
  return acc;
}

// Pr[X >= k] summed directly; 1 - cdf would cancel in the tail.
long double exact_upper(int n, int k, long double q) { return exact_cdf(n, n - k, 1.0L - q); }

}  // namespace

TEST(LogChoose, SmallValues) {
  EXPECT_NEAR(std::exp(log_choose(10, 3)), 120.0, 1e-9);
  EXPECT_NEAR(std::exp(log_choose(52, 5)), 2598960.0, 1e-5);
  EXPECT_EQ(log_choose(7, 0), 0.0);
}

TEST(BinomialCdf, MatchesLongDoubleOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const int k = static_cast<int>(rng() % (n + 1));
    const double q = 0.02 + 0.96 * uniform01(rng);
    const long double want = exact_cdf(n, k, q);
    EXPECT_NEAR(binomial_cdf(n, k, q), static_cast<double>(want), 1e-12 * std::max(1.0L, want)) << n << " " << k << " " << q;
  }
}

TEST(BinomialCdf, EdgeProbabilities) {
  EXPECT_EQ(binomial_cdf(10, 3, 0.0), 1.0);
  EXPECT_EQ(binomial_cdf(10, 3, 1.0), 0.0);
  EXPECT_EQ(binomial_cdf(10, 10, 1.0), 1.0);
  EXPECT_EQ(binomial_cdf(10, -1, 0.3), 0.0);
}

TEST(BinomialCdf, DeepTailStaysFinite) {
  const double l = log_binomial_cdf(10048, 500, 0.5);
  EXPECT_TRUE(std::isfinite(l));
  // pmf(k) <= cdf(k) <= pmf(k) / (1 - r), r = k q / ((n - k + 1)(1 - q)) bounding successive pmf ratios
  const double log_pmf = log_choose(10048, 500) + 500 * std::log(0.5) + 9548 * std::log(0.5);
  const double r = 500.0 / 9549.0;
  EXPECT_GE(l, log_pmf - 1e-9);
  EXPECT_LE(l, log_pmf - std::log1p(-r) + 1e-9);
  EXPECT_LT(l, -4900.0);
}

TEST(Chernoff, CertainSuccessGivesZero) { EXPECT_EQ(chernoff_low(50, 1.0, 0.3), 0.0); }

TEST(Chernoff, SinglePulseClosedForm) {
  const double v = chernoff_low(1, 0.5, 0.25);
  EXPECT_NEAR(v, std::pow(2.0, 0.25) * std::pow(0.5 / 0.75, 0.75), 1e-15);
  EXPECT_NEAR(v, 0.8774, 1e-4);
  EXPECT_GE(v, 0.5);
}

TEST(Chernoff, BothFormsDominateExactTails) {
  Rng rng(2);
  int checked = 0;
  while (checked < 200) {
    const int n = 1 + static_cast<int>(rng() % 60);
    const double p = 0.01 + 0.98 * uniform01(rng);
    const double t = 0.01 + 0.98 * uniform01(rng);
    if (std::abs(p - t) < 1e-3) continue;
    if (t < p) {
      const long double exact = exact_cdf(n, static_cast<int>(std::floor(t * n)), p);
      EXPECT_GE(chernoff_low(n, p, t), static_cast<double>(exact) * (1 - 1e-12));
    } else {
      const long double exact = exact_upper(n, static_cast<int>(std::ceil(t * n)), p);
      EXPECT_GE(chernoff_high(n, p, t), static_cast<double>(exact) * (1 - 1e-12));
    }
    ++checked;
  }
}

TEST(Chernoff, PreconditionsNamed) {
  try {
    chernoff_low(10, 0.3, 0.4);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("threshold < p"), std::string::npos);
  }
  EXPECT_THROW(chernoff_high(10, 0.5, 0.4), PreconditionError);
  EXPECT_THROW(chernoff_high(10, 0.5, 1.0), PreconditionError);
}

TEST(LogAddExp, HandlesInfinities) {
  EXPECT_EQ(log_add_exp(-INFINITY, 1.5), 1.5);
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
}
