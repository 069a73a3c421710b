#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hclim {

/// Point classification against the primary (e.g. 95%) and optional
/// secondary (e.g. 99%) limits. Above* means strictly greater than the upper
/// limit; AboveSecondary takes precedence.
enum class PointClass { Within, BelowLower, AbovePrimary, AboveSecondary };

std::string_view to_string(PointClass cls);

struct LimitPair {
  double lower = 0.0;
  double upper = 0.0;
};

struct ChartPoint {
  std::string id;
  double value = 0.0;
  double center = 0.0;
  LimitPair primary;
  std::optional<LimitPair> secondary;
  PointClass cls = PointClass::Within;
};

PointClass classify(double value, const LimitPair& primary,
                    const std::optional<LimitPair>& secondary);

/// Shewhart-style chart: center line, limit lines per level and classified
/// points. Limits may differ per point (per-cluster n*).
struct ChartSpec {
  std::string title;
  std::string y_label = "count";
  double primary_level = 0.95;
  std::optional<double> secondary_level;
  std::vector<ChartPoint> points;
  /// Two-sided limits count exceedances on both sides; upper-only limits
  /// only above.
  bool two_sided = true;
};

struct ExceedanceCounts {
  std::size_t below_primary = 0;
  std::size_t above_primary = 0;
  std::size_t above_secondary = 0;
};

ExceedanceCounts count_exceedances(const ChartSpec& spec);

/// Expected number of points outside a central 100(1 - alpha)% band: H alpha.
double expected_exceedance(std::size_t clusters, double alpha);

/// Adds a point and classifies it.
void add_point(ChartSpec& spec, std::string id, double value, double center,
               LimitPair primary, std::optional<LimitPair> secondary);

/// Deterministic SVG document (fixed element order, two-decimal coordinates).
std::string render_svg(const ChartSpec& spec);

/// Companion CSV of every plotted value and its classification.
std::string chart_points_csv(const ChartSpec& spec);

}  // namespace hclim
