#include "hclim/heuristic.hpp"

#include <cmath>

#include "hclim/error.hpp"

namespace hclim {
namespace {

void check_k(double k) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw DomainError("k must be finite and positive");
  }
}

void check_n_star(double n_star) {
  if (!std::isfinite(n_star) || n_star <= 0.0) {
    throw DomainError("n* must be finite and positive");
  }
}

void require_equal_offsets(const HistoricalData& data) {
  if (data.size() < 2) {
    throw DomainError("insufficient data: need at least 2 clusters");
  }
  if (!data.equal_offsets()) {
    throw DomainError(
        "design error: this chart is only defined for equal offsets");
  }
}

double mean_rate(const HistoricalData& data) {
  const auto y = data.counts();
  const auto n = data.offsets();
  double sum = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    sum += static_cast<double>(y[h]) / n[h];
  }
  return sum / static_cast<double>(data.size());
}

PredictionLimits symmetric(Method method, Scale scale, double level,
                           double center, double half_width) {
  return make_limits(method, scale, level, center, center - half_width,
                     center + half_width);
}

}  // namespace

PredictionLimits mean_sd_limits(const HistoricalData& data, double k) {
  check_k(k);
  require_equal_offsets(data);
  const double mean = data.mean_count();
  double ss = 0.0;
  for (auto y : data.counts()) {
    const double r = static_cast<double>(y) - mean;
    ss += r * r;
  }
  const double sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
  return symmetric(Method::MeanSd, Scale::Response, k, mean, k * sd);
}

PredictionLimits c_chart_limits(double y_bar, double k) {
  check_k(k);
  if (!std::isfinite(y_bar) || y_bar < 0.0) {
    throw DomainError("mean count must be non-negative");
  }
  return symmetric(Method::CChart, Scale::Response, k, y_bar,
                   k * std::sqrt(y_bar));
}

PredictionLimits c_chart_limits(const HistoricalData& data, double k) {
  require_equal_offsets(data);
  return c_chart_limits(data.mean_count(), k);
}

PredictionLimits u_chart_limits(double u_bar, double k, double n_star) {
  check_k(k);
  check_n_star(n_star);
  if (!std::isfinite(u_bar) || u_bar < 0.0) {
    throw DomainError("mean rate must be non-negative");
  }
  return symmetric(Method::UChart, Scale::PerOffsetUnit, k, u_bar,
                   k * std::sqrt(u_bar / n_star));
}

PredictionLimits u_chart_limits(const HistoricalData& data, double k,
                                double n_star) {
  return u_chart_limits(mean_rate(data), k, n_star);
}

LaneyResult laney_u_chart_limits(const HistoricalData& data, double k,
                                 double n_star) {
  check_k(k);
  check_n_star(n_star);
  if (data.size() < 2) {
    throw DomainError("insufficient data: need at least 2 clusters");
  }
  UChartStats stats;
  stats.u_bar = mean_rate(data);
  if (stats.u_bar == 0.0) throw NumericalError("zero mean rate");

  const auto y = data.counts();
  const auto n = data.offsets();
  const double h_count = static_cast<double>(data.size());
  stats.z_scores.reserve(data.size());
  double z_sum = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double u = static_cast<double>(y[h]) / n[h];
    const double z = (u - stats.u_bar) / std::sqrt(stats.u_bar / n[h]);
    stats.z_scores.push_back(z);
    z_sum += z;
  }
  const double z_bar = z_sum / h_count;
  double ss = 0.0;
  for (double z : stats.z_scores) ss += (z - z_bar) * (z - z_bar);
  stats.sigma_z = std::sqrt(ss / h_count);

  auto limits = symmetric(Method::LaneyUChart, Scale::PerOffsetUnit, k,
                          stats.u_bar,
                          k * std::sqrt(stats.u_bar / n_star) * stats.sigma_z);
  return {limits, std::move(stats)};
}

}  // namespace hclim
