#pragma once

#include <vector>

#include "hclim/data.hpp"
#include "hclim/limits.hpp"

namespace hclim {

/// ybar -/+ k SD (sample SD, divisor H - 1). Requires equal offsets, H >= 2.
PredictionLimits mean_sd_limits(const HistoricalData& data, double k);

/// Sheward c-chart: ybar -/+ k sqrt(ybar).
PredictionLimits c_chart_limits(double y_bar, double k);
/// Requires equal offsets and H >= 2.
PredictionLimits c_chart_limits(const HistoricalData& data, double k);

/// Sheward u-chart on the per-offset-unit scale: ubar -/+ k sqrt(ubar / n*).
PredictionLimits u_chart_limits(double u_bar, double k, double n_star);
/// ubar is the unweighted mean of the rates y_h / n_h.
PredictionLimits u_chart_limits(const HistoricalData& data, double k,
                                double n_star);

/// Intermediate statistics of the overdispersion-corrected u-chart.
struct UChartStats {
  double u_bar = 0.0;
  std::vector<double> z_scores;
  /// sqrt(sum (z_h - zbar)^2 / H), divisor H.
  double sigma_z = 0.0;
};

struct LaneyResult {
  PredictionLimits limits;
  UChartStats stats;
};

/// Laney's u-chart: ubar -/+ k sqrt(ubar / n*) sigma_z with
/// z_h = (u_h - ubar) / sqrt(ubar / n_h).
LaneyResult laney_u_chart_limits(const HistoricalData& data, double k,
                                 double n_star);

}  // namespace hclim
