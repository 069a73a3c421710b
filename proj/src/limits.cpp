#include "hclim/limits.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "hclim/error.hpp"

namespace hclim {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::MeanSd, "mean-sd"},
    {Method::CChart, "c-chart"},
    {Method::UChart, "u-chart"},
    {Method::LaneyUChart, "laney"},
    {Method::SimplePoisson, "simple-pois"},
    {Method::QuasiPoisson, "qp"},
    {Method::NegBinomial, "nb"},
    {Method::CalibratedQuasiPoisson, "calib-qp"},
    {Method::CalibratedNegBinomial, "calib-nb"},
}};

std::optional<std::int64_t> ceil_count(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  return static_cast<std::int64_t>(std::ceil(x));
}

std::optional<std::int64_t> floor_count(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  return static_cast<std::int64_t>(std::floor(x));
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

std::string_view to_string(Scale scale) {
  return scale == Scale::Response ? "response" : "per_offset_unit";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

PredictionLimits make_limits(Method method, Scale scale, double level,
                             double center, double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw NumericalError("invalid limits: lower exceeds upper or is NaN");
  }
  PredictionLimits out;
  out.lower = lower;
  out.upper = upper;
  out.center = center;
  out.method = method;
  out.level = level;
  out.scale = scale;
  out.covered_low = ceil_count(lower);
  out.covered_high = floor_count(upper);
  return out;
}

PredictionLimits clamp_at_zero(PredictionLimits limits) {
  if (limits.lower < 0.0) {
    limits.lower = 0.0;
    limits.covered_low = 0;
  }
  if (limits.upper < 0.0) {
    limits.upper = 0.0;
    limits.covered_high = 0;
  }
  return limits;
}

}  // namespace hclim
