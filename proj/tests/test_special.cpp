#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "hclim/error.hpp"
#include "hclim/special.hpp"

using namespace hclim;

TEST(NormalQuantile, MatchesBoostAcrossRange) {
  const boost::math::normal_distribution<double> n01;
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.001, 0.01, 0.025,
                   0.05, 0.1, 0.3, 0.425, 0.5, 0.575, 0.7, 0.9, 0.95, 0.975,
                   0.99, 0.999, 1 - 1e-10}) {
    const double expected = boost::math::quantile(n01, p);
    EXPECT_NEAR(normal_quantile(p), expected, 1e-13 * std::max(1.0, std::fabs(expected)))
        << "p = " << p;
  }
}

TEST(NormalQuantile, KnownValuesAndEndpoints) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_EQ(normal_quantile(0.0), -INFINITY);
  EXPECT_EQ(normal_quantile(1.0), INFINITY);
  EXPECT_THROW(normal_quantile(1.5), hclim::DomainError);
}

TEST(NormalCdf, RoundTrip) {
  for (double x : {-6.0, -1.96, -0.3, 0.0, 0.8, 2.5}) {
    EXPECT_NEAR(normal_quantile(normal_cdf(x)), x, 1e-9);
  }
}

TEST(Polygamma, KnownValues) {
  EXPECT_NEAR(digamma(1.0), -0.5772156649015329, 1e-14);
  EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6, 1e-14);
  // Recurrences psi(x+1) = psi(x) + 1/x, psi1(x+1) = psi1(x) - 1/x^2.
  for (double x : {0.01, 0.7, 3.3, 150.0}) {
    EXPECT_NEAR(digamma(x + 1) - digamma(x), 1 / x, 1e-10 / x);
    EXPECT_NEAR(trigamma(x) - trigamma(x + 1), 1 / (x * x), 1e-10 / (x * x));
  }
}
