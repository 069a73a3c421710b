#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hclim/data.hpp"
#include "hclim/estimation.hpp"
#include "hclim/prediction.hpp"
#include "hclim/rng.hpp"

namespace hclim {

/// Bootstrap size B, bisection tolerance t and search bounds.
struct CalibrationSettings {
  std::size_t bootstrap_samples = 10000;
  double tolerance = 0.001;
  int max_bisection_iters = 100;
  double bracket_hi_init = 10.0;
  RngState seed;
  NbVarianceVariant variant = NbVarianceVariant::MainText;

  void validate() const;
};

/// Sampling dispersion floor for quasi-Poisson bootstrap data.
inline constexpr double kBootstrapPhiFloor = 1.001;
/// Bracket doubling gives up beyond this coefficient.
inline constexpr double kMaxCoefficient = 1e6;

/// Per replicate b: center_b = n* lambda_b, se_b from the refit, and the
/// future draw y*_b. Replicates whose refit failed are removed and counted.
struct BootstrapReplicates {
  std::vector<double> center;
  std::vector<double> se;
  std::vector<std::int64_t> y_star;
  std::size_t requested = 0;
  std::size_t dropped = 0;

  [[nodiscard]] std::size_t size() const { return center.size(); }
};

/// Parametric bootstrap from `fit` under the historical `design`; replicate b
/// always uses substream b of settings.seed.
BootstrapReplicates bootstrap_replicates(const ModelFit& fit,
                                         const DesignSpec& design,
                                         const TargetDesign& target,
                                         const CalibrationSettings& settings);

enum class Side { Lower, Upper };

/// Bootstrapped coverage of one side at coefficient q:
///   lower: mean of 1[center_b - q se_b <= y*_b]
///   upper: mean of 1[y*_b <= center_b + q se_b]
double bootstrap_coverage(const BootstrapReplicates& reps, Side side, double q);

struct BisectionResult {
  double q = 0.0;
  double achieved_psi = 0.0;
  int iterations = 0;
  /// False when the iteration cap was hit before |psi - target| <= t.
  bool tolerance_met = false;
};

BisectionResult bisect_coefficient(const BootstrapReplicates& reps, Side side,
                                   double target_psi,
                                   const CalibrationSettings& settings);

struct CalibrationResult {
  /// NaN for upper-only targets.
  double q_lower = 0.0;
  double q_upper = 0.0;
  double achieved_psi_lower = 0.0;
  double achieved_psi_upper = 0.0;
  bool lower_tolerance_met = true;
  bool upper_tolerance_met = true;
  std::size_t n_boot_used = 0;
  std::size_t n_boot_dropped = 0;
  ModelFit fit;
  PredictionStdErr stderr_parts;
  /// Original fit's center and se with the calibrated coefficients.
  PredictionLimits limits;
};

/// Calibrates an existing fit whose historical design is `design`.
CalibrationResult calibrate_fit(const ModelFit& fit, const DesignSpec& design,
                                const TargetDesign& target,
                                const CalibrationSettings& settings);

CalibrationResult calibrated_pi(const HistoricalData& data,
                                const TargetDesign& target,
                                const CalibrationSettings& settings,
                                Model model);

}  // namespace hclim
