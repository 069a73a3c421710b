#include "hclim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hclim/error.hpp"
#include "hclim/parallel.hpp"
#include "hclim/sampling.hpp"

namespace hclim {

void CalibrationSettings::validate() const {
  if (bootstrap_samples < 100) {
    throw DomainError("calibration needs at least 100 bootstrap samples");
  }
  if (!(tolerance > 0.0 && tolerance < 0.5)) {
    throw DomainError("calibration tolerance must lie in (0, 0.5)");
  }
  if (max_bisection_iters < 1) {
    throw DomainError("bisection needs at least one iteration");
  }
  if (!(bracket_hi_init > 0.0) || !std::isfinite(bracket_hi_init)) {
    throw DomainError("initial bracket must be positive");
  }
}

namespace {

// Draws one historical replicate plus one future count from the fitted model.
class ReplicateSampler {
 public:
  ReplicateSampler(const ModelFit& fit, const DesignSpec& design,
                   double n_star)
      : model_(fit.model()),
        design_(design),
        n_star_(n_star),
        lambda_(fit.lambda_hat) {
    if (model_ == Model::QuasiPoisson) {
      phi_ = std::max(fit.phi(), kBootstrapPhiFloor);
    } else {
      kappa_ = fit.kappa();
    }
  }

  std::vector<std::int64_t> historical(Rng& rng) const {
    if (model_ == Model::QuasiPoisson) {
      return sample_quasi_poisson(rng, design_, {lambda_, phi_});
    }
    if (kappa_ == 0.0) return sample_poisson(rng, design_, lambda_);
    return sample_neg_binomial(rng, design_, {lambda_, kappa_});
  }

  std::int64_t future(Rng& rng) const {
    if (model_ == Model::QuasiPoisson) {
      return draw_quasi_poisson(rng, n_star_, {lambda_, phi_});
    }
    if (kappa_ == 0.0) return poisson_sample(rng, n_star_ * lambda_);
    return draw_neg_binomial(rng, n_star_, {lambda_, kappa_});
  }

 private:
  Model model_;
  const DesignSpec& design_;
  double n_star_;
  double lambda_;
  double phi_ = 0.0;
  double kappa_ = 0.0;
};

struct Replicate {
  double center = 0.0;
  double se = 0.0;
  std::int64_t y_star = 0;
  bool ok = false;
};

}  // namespace

BootstrapReplicates bootstrap_replicates(const ModelFit& fit,
                                         const DesignSpec& design,
                                         const TargetDesign& target,
                                         const CalibrationSettings& settings) {
  settings.validate();
  target.validate();
  if (!(fit.lambda_hat > 0.0)) {
    throw DomainError("bootstrap needs a positive lambda-hat");
  }
  const ReplicateSampler sampler(fit, design, target.n_star);
  const Model model = fit.model();
  const std::size_t count = settings.bootstrap_samples;
  const std::uint64_t base_seed =
      combine_ids(settings.seed.seed, settings.seed.stream_id);

  std::vector<Replicate> slots(count);
  parallel_for(count, [&](std::size_t b) {
    Rng rng(RngState{base_seed, b});
    auto counts = sampler.historical(rng);
    const std::int64_t y_star = sampler.future(rng);
    try {
      const HistoricalData replicate(
          std::move(counts), std::vector<double>(design.offsets().begin(),
                                                 design.offsets().end()));
      const ModelFit refit = fit_model(model, replicate);
      if (!refit.converged) return;
      const auto parts =
          prediction_stderr(refit, target.n_star, settings.variant);
      slots[b] = {target.n_star * refit.lambda_hat, parts.se, y_star, true};
    } catch (const NumericalError&) {
      // Degenerate replicate (e.g. all zero): dropped and counted below.
    }
  });

  BootstrapReplicates out;
  out.requested = count;
  out.center.reserve(count);
  out.se.reserve(count);
  out.y_star.reserve(count);
  for (const auto& r : slots) {
    if (!r.ok) {
      ++out.dropped;
      continue;
    }
    out.center.push_back(r.center);
    out.se.push_back(r.se);
    out.y_star.push_back(r.y_star);
  }
  if (2 * out.dropped > count) {
    throw NumericalError("unstable bootstrap: " + std::to_string(out.dropped) +
                         " of " + std::to_string(count) +
                         " refits failed");
  }
  return out;
}

namespace {

bool covered(const BootstrapReplicates& reps, std::size_t b, Side side,
             double q) {
  const double y = static_cast<double>(reps.y_star[b]);
  if (side == Side::Lower) return reps.center[b] - q * reps.se[b] <= y;
  return y <= reps.center[b] + q * reps.se[b];
}

std::size_t coverage_count(const BootstrapReplicates& reps, Side side,
                           double q) {
  std::size_t hits = 0;
  for (std::size_t b = 0; b < reps.size(); ++b) {
    hits += covered(reps, b, side, q) ? 1 : 0;
  }
  return hits;
}

// Largest breakpoint <= q at which a replicate switches to covered; the
// coverage step function is constant from there up to q.
double step_left_edge(const BootstrapReplicates& reps, Side side, double q) {
  double edge = 0.0;
  for (std::size_t b = 0; b < reps.size(); ++b) {
    if (reps.se[b] <= 0.0) continue;
    const double y = static_cast<double>(reps.y_star[b]);
    const double r = side == Side::Lower ? (reps.center[b] - y) / reps.se[b]
                                         : (y - reps.center[b]) / reps.se[b];
    if (r <= q && r > edge) edge = r;
  }
  return edge;
}

}  // namespace

double bootstrap_coverage(const BootstrapReplicates& reps, Side side,
                          double q) {
  if (reps.size() == 0) throw DomainError("no bootstrap replicates");
  return static_cast<double>(coverage_count(reps, side, q)) /
         static_cast<double>(reps.size());
}

BisectionResult bisect_coefficient(const BootstrapReplicates& reps, Side side,
                                   double target_psi,
                                   const CalibrationSettings& settings) {
  if (reps.size() == 0) throw DomainError("no bootstrap replicates");
  if (!(target_psi > 0.0 && target_psi < 1.0)) {
    throw DomainError("target coverage must lie in (0, 1)");
  }
  const double tol = settings.tolerance;
  auto psi = [&](double q) { return bootstrap_coverage(reps, side, q); };
  // Slack for psi values such as 487/500 that sit exactly on the band edge.
  auto in_band = [&](double p) { return std::fabs(p - target_psi) <= tol + 1e-12; };

  const double p0 = psi(0.0);
  if (in_band(p0)) return {0.0, p0, 0, true};
  // Coverage only grows with q; already above target at q = 0 (e.g. every
  // y*_b equals its center), so q = 0 is the answer.
  if (p0 > target_psi) return {0.0, p0, 0, true};

  double lo = 0.0;
  double hi = settings.bracket_hi_init;
  double p_hi = psi(hi);
  while (p_hi < target_psi - tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxCoefficient) {
      throw NumericalError(
          "calibration bracket exceeded 1e6; bootstrap standard errors are "
          "degenerate");
    }
    p_hi = psi(hi);
  }

  std::optional<double> found;
  if (in_band(p_hi)) found = hi;
  int iterations = 0;
  while (!found && iterations < settings.max_bisection_iters) {
    ++iterations;
    const double mid = 0.5 * (lo + hi);
    const double p = psi(mid);
    if (in_band(p)) {
      found = mid;
    } else if (p > target_psi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (!found) return {hi, psi(hi), iterations, false};

  const std::size_t hits = coverage_count(reps, side, *found);
  const double edge = step_left_edge(reps, side, *found);
  const double q = coverage_count(reps, side, edge) == hits ? edge : *found;
  return {q, psi(q), iterations, true};
}

CalibrationResult calibrate_fit(const ModelFit& fit, const DesignSpec& design,
                                const TargetDesign& target,
                                const CalibrationSettings& settings) {
  if (fit.model() == Model::NegBinomial && !fit.converged) {
    throw NumericalError("negative-binomial fit did not converge");
  }
  const auto reps = bootstrap_replicates(fit, design, target, settings);

  CalibrationResult result;
  result.fit = fit;
  result.n_boot_used = reps.size();
  result.n_boot_dropped = reps.dropped;
  result.stderr_parts = prediction_stderr(fit, target.n_star, settings.variant);

  std::optional<double> q_lower;
  double upper_target = 1.0 - target.alpha;
  if (target.sidedness == Sidedness::TwoSided) {
    upper_target = 1.0 - target.alpha / 2.0;
    const auto lower = bisect_coefficient(reps, Side::Lower, upper_target, settings);
    q_lower = lower.q;
    result.q_lower = lower.q;
    result.achieved_psi_lower = lower.achieved_psi;
    result.lower_tolerance_met = lower.tolerance_met;
  } else {
    result.q_lower = std::numeric_limits<double>::quiet_NaN();
    result.achieved_psi_lower = std::numeric_limits<double>::quiet_NaN();
  }
  const auto upper = bisect_coefficient(reps, Side::Upper, upper_target, settings);
  result.q_upper = upper.q;
  result.achieved_psi_upper = upper.achieved_psi;
  result.upper_tolerance_met = upper.tolerance_met;

  const Method method = fit.model() == Model::QuasiPoisson
                            ? Method::CalibratedQuasiPoisson
                            : Method::CalibratedNegBinomial;
  result.limits = limits_from_coefficients(
      method, target.alpha, target.n_star * fit.lambda_hat,
      result.stderr_parts.se, q_lower, upper.q);
  return result;
}

CalibrationResult calibrated_pi(const HistoricalData& data,
                                const TargetDesign& target,
                                const CalibrationSettings& settings,
                                Model model) {
  return calibrate_fit(fit_model(model, data), data.design(), target, settings);
}

}  // namespace hclim
