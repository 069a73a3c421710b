#include <gtest/gtest.h>

#include <cmath>

#include "hclim/calibration.hpp"
#include "hclim/error.hpp"
#include "hclim/sampling.hpp"
#include "hclim/special.hpp"
#include "test_support.hpp"

using namespace hclim;

namespace {

// y*_b on the standard-normal quantile grid, stored at scale 1e6 so the
// integer replicate draws keep six decimals; se_b carries the same scale.
BootstrapReplicates normal_grid(std::size_t b_count) {
  BootstrapReplicates reps;
  for (std::size_t b = 1; b <= b_count; ++b) {
    const double z = normal_quantile((b - 0.5) / static_cast<double>(b_count));
    reps.center.push_back(0.0);
    reps.se.push_back(1e6);
    reps.y_star.push_back(std::llround(z * 1e6));
  }
  reps.requested = b_count;
  return reps;
}

CalibrationSettings settings_with(std::uint64_t seed, std::size_t b) {
  CalibrationSettings s;
  s.bootstrap_samples = b;
  s.seed = {seed, 0};
  return s;
}

}  // namespace

TEST(Bisection, NormalGridOracle) {
  for (std::size_t b : {1000u, 10'000u, 100'000u}) {
    const auto reps = normal_grid(b);
    const auto s = settings_with(1, b);
    const auto up = bisect_coefficient(reps, Side::Upper, 0.975, s);
    const auto lo = bisect_coefficient(reps, Side::Lower, 0.975, s);
    EXPECT_NEAR(up.q, 1.96, 0.02) << "B = " << b;
    EXPECT_NEAR(lo.q, 1.96, 0.02) << "B = " << b;
    EXPECT_NEAR(up.q, lo.q, 0.05);
    EXPECT_TRUE(up.tolerance_met);
    EXPECT_NEAR(up.achieved_psi, 0.975, s.tolerance + 1e-12);
    EXPECT_NEAR(lo.achieved_psi, 0.975, s.tolerance + 1e-12);
  }
}

TEST(Bisection, PsiHasStepOneOverB) {
  const auto reps = normal_grid(1000);
  const auto r = bisect_coefficient(reps, Side::Upper, 0.9, settings_with(1, 1000));
  const double steps = r.achieved_psi * 1000;
  EXPECT_NEAR(steps, std::round(steps), 1e-9);
  for (double q : {0.1, 0.77, 1.3, 2.9}) {
    const double k = bootstrap_coverage(reps, Side::Lower, q) * 1000;
    EXPECT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(Bisection, CoverageIsMonotone) {
  const auto reps = normal_grid(2000);
  double last_lo = 0.0, last_up = 0.0;
  for (double q = 0.0; q < 4.0; q += 0.05) {
    const double lo = bootstrap_coverage(reps, Side::Lower, q);
    const double up = bootstrap_coverage(reps, Side::Upper, q);
    EXPECT_GE(lo, last_lo);
    EXPECT_GE(up, last_up);
    last_lo = lo;
    last_up = up;
  }
}

TEST(Bisection, DegenerateReplicatesGiveZero) {
  BootstrapReplicates reps;
  for (int b = 0; b < 500; ++b) {
    reps.center.push_back(7.0);
    reps.se.push_back(1.0);
    reps.y_star.push_back(7);
  }
  const auto r = bisect_coefficient(reps, Side::Upper, 0.975, settings_with(1, 500));
  EXPECT_NEAR(r.q, 0.0, 1e-12);
  EXPECT_EQ(r.achieved_psi, 1.0);
  EXPECT_TRUE(r.tolerance_met);
}

TEST(Bisection, ZeroStandardErrorsExhaustBracket) {
  BootstrapReplicates reps;
  for (int b = 0; b < 200; ++b) {
    reps.center.push_back(0.0);
    reps.se.push_back(0.0);
    reps.y_star.push_back(b % 2 ? 1 : -1);
  }
  EXPECT_THROW(bisect_coefficient(reps, Side::Upper, 0.975, settings_with(1, 200)),
               NumericalError);
}

TEST(Bisection, InputValidation) {
  const auto s = settings_with(1, 100);
  EXPECT_THROW(bisect_coefficient({}, Side::Upper, 0.975, s), DomainError);
  EXPECT_THROW(bisect_coefficient(normal_grid(100), Side::Upper, 1.0, s), DomainError);
}

TEST(Bootstrap, CentersAreUnbiased) {
  const auto fixture = hclim::test::ta1537_fixture();
  const auto fit = fit_quasi_poisson(fixture.data);
  const auto reps = bootstrap_replicates(fit, fixture.data.design(),
                                         {3.0, 0.05, Sidedness::TwoSided},
                                         settings_with(5, 10'000));
  ASSERT_EQ(reps.size(), 10'000u);
  EXPECT_EQ(reps.dropped, 0u);
  double mean = 0.0;
  for (double c : reps.center) mean += c;
  mean /= reps.size();
  EXPECT_NEAR(mean, 25.05, 0.3);
}

TEST(Bootstrap, DeterministicReplicates) {
  const auto fixture = hclim::test::ta1537_fixture();
  const auto fit = fit_neg_binomial(fixture.data);
  const TargetDesign target{3.0, 0.05, Sidedness::TwoSided};
  const auto a = bootstrap_replicates(fit, fixture.data.design(), target,
                                      settings_with(9, 300));
  const auto b = bootstrap_replicates(fit, fixture.data.design(), target,
                                      settings_with(9, 300));
  EXPECT_EQ(a.center, b.center);
  EXPECT_EQ(a.se, b.se);
  EXPECT_EQ(a.y_star, b.y_star);
  const auto c = bootstrap_replicates(fit, fixture.data.design(), target,
                                      settings_with(10, 300));
  EXPECT_NE(a.y_star, c.y_star);
}

TEST(Calibration, LimitsBracketCenter) {
  const auto fixture = hclim::test::ta1537_fixture();
  for (auto model : {Model::QuasiPoisson, Model::NegBinomial}) {
    const auto r = calibrated_pi(fixture.data, {3.0, 0.05, Sidedness::TwoSided},
                                 settings_with(3, 2000), model);
    EXPECT_GE(r.q_lower, 0.0);
    EXPECT_GE(r.q_upper, 0.0);
    EXPECT_LE(r.limits.lower, r.limits.center);
    EXPECT_GE(r.limits.upper, r.limits.center);
    EXPECT_NEAR(r.limits.center, 3 * fixture.data.total_y() / fixture.data.total_n(),
                1e-9);
    EXPECT_NEAR(r.limits.upper - r.limits.center, r.q_upper * r.stderr_parts.se, 1e-9);
    EXPECT_NEAR(r.achieved_psi_lower, 0.975, 0.001 + 1e-12);
    EXPECT_NEAR(r.achieved_psi_upper, 0.975, 0.001 + 1e-12);
  }
}

TEST(Calibration, UpperOnlyTargetsOneMinusAlpha) {
  const auto fixture = hclim::test::ta1537_fixture();
  const auto r = calibrated_pi(fixture.data, {3.0, 0.05, Sidedness::UpperOnly},
                               settings_with(3, 2000), Model::QuasiPoisson);
  EXPECT_TRUE(std::isnan(r.q_lower));
  EXPECT_EQ(r.limits.lower, -INFINITY);
  EXPECT_NEAR(r.achieved_psi_upper, 0.95, 0.001 + 1e-12);
}

TEST(Calibration, SkewedDataShiftsUpperCoefficient) {
  int upper_larger = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng({seed, 77});
    const auto design = DesignSpec::constant(10, 1.0);
    auto ys = sample_quasi_poisson(rng, design, {5.0, 5.0});
    ys[0] += 1;
    const HistoricalData d(ys, std::vector<double>(10, 1.0));
    const auto r = calibrated_pi(d, {1.0, 0.05, Sidedness::TwoSided},
                                 settings_with(seed, 4000), Model::QuasiPoisson);
    upper_larger += r.q_upper > r.q_lower;
  }
  EXPECT_EQ(upper_larger, 20);
}

TEST(Calibration, Deterministic) {
  const auto fixture = hclim::test::ta1537_fixture();
  const TargetDesign target{3.0, 0.01, Sidedness::TwoSided};
  const auto a = calibrated_pi(fixture.data, target, settings_with(4, 1000),
                               Model::NegBinomial);
  const auto b = calibrated_pi(fixture.data, target, settings_with(4, 1000),
                               Model::NegBinomial);
  EXPECT_EQ(a.q_lower, b.q_lower);
  EXPECT_EQ(a.q_upper, b.q_upper);
  EXPECT_EQ(a.limits.upper, b.limits.upper);
}

TEST(Calibration, SettingsValidation) {
  const auto fixture = hclim::test::ta1537_fixture();
  EXPECT_THROW(calibrated_pi(fixture.data, {3.0, 0.05, Sidedness::TwoSided},
                             settings_with(1, 50), Model::QuasiPoisson),
               DomainError);
}
