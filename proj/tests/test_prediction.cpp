#include <gtest/gtest.h>

#include <cmath>

#include "hclim/error.hpp"
#include "hclim/prediction.hpp"

using namespace hclim;

namespace {

ModelFit summary_fit(double lambda, Dispersion dispersion, std::size_t h,
                     double n_bar) {
  ModelFit fit;
  fit.lambda_hat = lambda;
  fit.dispersion = dispersion;
  fit.clusters = h;
  fit.n_bar = n_bar;
  fit.converged = true;
  return fit;
}

const TargetDesign kTable{3.0, 0.05, Sidedness::TwoSided};

}  // namespace

TEST(QuasiPoissonPi, ClosedForm) {
  const auto pi = quasi_poisson_pi(summary_fit(8.35, QuasiPoissonDispersion{3.18}, 66, 3),
                                   kTable);
  EXPECT_NEAR(pi.limits.lower, 7.43, 0.05);
  EXPECT_NEAR(pi.limits.upper, 42.70, 0.05);
  EXPECT_EQ(pi.limits.covered_low, 8);
  EXPECT_EQ(pi.limits.covered_high, 42);
  const double var = 9 * 3.18 * 8.35 / (3 * 66) + 3 * 3.18 * 8.35;
  EXPECT_NEAR(pi.stderr_parts.se, std::sqrt(var), 1e-12);
}

TEST(QuasiPoissonPi, PhiBelowOneIsClamped) {
  const auto under = quasi_poisson_pi(summary_fit(5, QuasiPoissonDispersion{0.4}, 10, 1),
                                      kTable);
  const auto one = quasi_poisson_pi(summary_fit(5, QuasiPoissonDispersion{1.0}, 10, 1),
                                    kTable);
  EXPECT_DOUBLE_EQ(under.limits.upper, one.limits.upper);
}

TEST(NegBinPi, ClosedFormMainText) {
  const auto pi = neg_binomial_pi(summary_fit(8.35, NegBinomialDispersion{0.082}, 66, 3),
                                  kTable);
  EXPECT_NEAR(pi.limits.lower, 7.86, 0.05);
  EXPECT_NEAR(pi.limits.upper, 42.26, 0.05);
  EXPECT_EQ(pi.limits.covered_low, 8);
  EXPECT_EQ(pi.limits.covered_high, 42);
}

TEST(NegBinPi, SupplementVariantUsesLambdaSquared) {
  const double lambda = 8.35, kappa = 0.082, n_bar = 3, n_star = 3;
  const std::size_t h = 66;
  const auto s = neg_binomial_stderr(lambda, kappa, n_bar, h, n_star,
                                     NbVarianceVariant::Supplement);
  const double var_est = n_star * n_star * (lambda + kappa * n_bar * lambda * lambda) /
                         (n_bar * h);
  const double var_fut = n_star * lambda + kappa * n_star * n_star * lambda * lambda;
  EXPECT_NEAR(s.var_estimation, var_est, 1e-12);
  EXPECT_NEAR(s.var_future, var_fut, 1e-12);
  const auto m = neg_binomial_stderr(lambda, kappa, n_bar, h, n_star,
                                     NbVarianceVariant::MainText);
  EXPECT_NEAR(m.var_estimation,
              n_star * n_star * (lambda + kappa * n_bar * lambda) / (n_bar * h), 1e-12);
  EXPECT_EQ(m.var_future, s.var_future);
  EXPECT_EQ(parse_variant("supplement"), NbVarianceVariant::Supplement);
  EXPECT_EQ(parse_variant(to_string(NbVarianceVariant::MainText)),
            NbVarianceVariant::MainText);
}

TEST(NegBinPi, RequiresConvergedFit) {
  auto fit = summary_fit(5, NegBinomialDispersion{0.1}, 10, 1);
  fit.converged = false;
  EXPECT_THROW(neg_binomial_pi(fit, kTable), NumericalError);
}

TEST(SimplePoissonPi, Formula) {
  const auto pi = simple_poisson_pi(50, 10.0, {2.0, 0.05, Sidedness::TwoSided});
  const double lambda = 5.0;
  const double se = std::sqrt(4 * lambda / 10 + 2 * lambda);
  EXPECT_NEAR(pi.limits.upper, 10 + 1.959963984540054 * se, 1e-9);
  EXPECT_NEAR(pi.limits.lower, 10 - 1.959963984540054 * se, 1e-9);
}

TEST(Prediction, WidthGrowsWithDispersion) {
  double last = 0.0;
  for (double phi : {1.0, 1.5, 3.0, 10.0}) {
    const auto pi = quasi_poisson_pi(summary_fit(4, QuasiPoissonDispersion{phi}, 20, 2),
                                     kTable);
    EXPECT_GT(pi.limits.width(), last);
    last = pi.limits.width();
  }
}

TEST(Prediction, UpperOnlyUsesOneSidedQuantile) {
  const auto fit = summary_fit(4, QuasiPoissonDispersion{2}, 20, 2);
  const auto pi = quasi_poisson_pi(fit, {2.0, 0.05, Sidedness::UpperOnly});
  EXPECT_EQ(pi.limits.lower, -INFINITY);
  EXPECT_FALSE(pi.limits.covered_low);
  EXPECT_NEAR(pi.limits.upper, 8 + 1.6448536269514722 * pi.stderr_parts.se, 1e-9);
}

TEST(Prediction, TargetValidation) {
  const auto fit = summary_fit(4, QuasiPoissonDispersion{2}, 20, 2);
  EXPECT_THROW(quasi_poisson_pi(fit, {0.0, 0.05, Sidedness::TwoSided}), DomainError);
  EXPECT_THROW(quasi_poisson_pi(fit, {1.0, 0.0, Sidedness::TwoSided}), DomainError);
  EXPECT_THROW(quasi_poisson_pi(fit, {1.0, 1.0, Sidedness::TwoSided}), DomainError);
}

TEST(SimplePoissonPi, HandExampleAndZeroCount) {
  const auto pi = simple_poisson_pi(100, 1.0, {1.0, 0.05, Sidedness::TwoSided});
  EXPECT_NEAR(pi.limits.lower, 72.28, 0.005);
  EXPECT_NEAR(pi.limits.upper, 127.72, 0.005);
  EXPECT_NEAR(pi.stderr_parts.var_estimation / pi.stderr_parts.var_future, 1.0, 1e-15);

  const auto zero = simple_poisson_pi(0, 4.0, {2.0, 0.05, Sidedness::TwoSided});
  EXPECT_TRUE(zero.limits.degenerate);
  EXPECT_EQ(zero.limits.lower, 0.0);
  EXPECT_EQ(zero.limits.upper, 0.0);
}
