#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace hclim {

enum class Method {
  MeanSd,
  CChart,
  UChart,
  LaneyUChart,
  SimplePoisson,
  QuasiPoisson,
  NegBinomial,
  CalibratedQuasiPoisson,
  CalibratedNegBinomial,
};

enum class Scale { Response, PerOffsetUnit };

std::string_view to_string(Method method);
std::string_view to_string(Scale scale);
/// Accepts the CLI spellings (mean-sd, c-chart, u-chart, laney, simple-pois,
/// qp, nb, calib-qp, calib-nb).
std::optional<Method> parse_method(std::string_view name);

/// A lower/upper control limit pair. `level` holds k for heuristic charts and
/// alpha for prediction intervals. An upper-only limit has lower = -inf.
struct PredictionLimits {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  Method method = Method::CChart;
  double level = 0.0;
  Scale scale = Scale::Response;
  /// Lowest and highest integer inside [lower, upper]; absent for an
  /// infinite bound.
  std::optional<std::int64_t> covered_low;
  std::optional<std::int64_t> covered_high;
  /// Set when the limits collapse because the estimate is degenerate.
  bool degenerate = false;

  [[nodiscard]] double width() const { return upper - lower; }
  [[nodiscard]] bool contains(double value) const {
    return lower <= value && value <= upper;
  }
};

/// Builds limits center -/+ half widths and fills the covered-count bracket.
PredictionLimits make_limits(Method method, Scale scale, double level,
                             double center, double lower, double upper);

/// Copy with negative bounds raised to zero.
PredictionLimits clamp_at_zero(PredictionLimits limits);

}  // namespace hclim
