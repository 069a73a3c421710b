#include "hclim/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hclim/error.hpp"
#include "hclim/format.hpp"

namespace hclim {

std::string_view to_string(PointClass cls) {
  switch (cls) {
    case PointClass::Within:
      return "within";
    case PointClass::BelowLower:
      return "below-primary";
    case PointClass::AbovePrimary:
      return "above-primary";
    case PointClass::AboveSecondary:
      return "above-secondary";
  }
  return "within";
}

PointClass classify(double value, const LimitPair& primary,
                    const std::optional<LimitPair>& secondary) {
  if (secondary && value > secondary->upper) return PointClass::AboveSecondary;
  if (value > primary.upper) return PointClass::AbovePrimary;
  if (value < primary.lower) return PointClass::BelowLower;
  return PointClass::Within;
}

void add_point(ChartSpec& spec, std::string id, double value, double center,
               LimitPair primary, std::optional<LimitPair> secondary) {
  const auto cls = classify(value, primary, secondary);
  spec.points.push_back(
      {std::move(id), value, center, primary, secondary, cls});
}

ExceedanceCounts count_exceedances(const ChartSpec& spec) {
  ExceedanceCounts out;
  for (const auto& p : spec.points) {
    if (p.value > p.primary.upper) ++out.above_primary;
    if (p.value < p.primary.lower) ++out.below_primary;
    if (p.secondary && p.value > p.secondary->upper) ++out.above_secondary;
  }
  return out;
}

double expected_exceedance(std::size_t clusters, double alpha) {
  return static_cast<double>(clusters) * alpha;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) { return format_fixed(v, 2); }

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view fill_for(PointClass cls) {
  switch (cls) {
    case PointClass::Within: return "#9e9e9e";
    case PointClass::BelowLower:
    case PointClass::AbovePrimary: return "#ff8c00";
    case PointClass::AboveSecondary: return "#d62728";
  }
  return "#9e9e9e";
}

class Frame {
 public:
  Frame(std::size_t count, double y_min, double y_max)
      : count_(count), y_min_(y_min), y_max_(y_max) {}

  double x(std::size_t i) const {
    return kLeft + (static_cast<double>(i) + 0.5) * step();
  }
  double step() const {
    return (kWidth - kLeft - kRight) / static_cast<double>(count_);
  }
  double y(double v) const {
    const double h = kHeight - kTop - kBottom;
    return kTop + h * (1.0 - (v - y_min_) / (y_max_ - y_min_));
  }

 private:
  std::size_t count_;
  double y_min_;
  double y_max_;
};

template <typename Get>
bool constant_over(const std::vector<ChartPoint>& pts, Get get) {
  return std::all_of(pts.begin(), pts.end(),
                     [&](const ChartPoint& p) { return get(p) == get(pts.front()); });
}

// A constant line spans the plot; varying limits become one segment per point.
template <typename Get>
void draw_level(std::ostringstream& out, const std::vector<ChartPoint>& pts,
                const Frame& f, Get get, std::string_view style) {
  if (!std::isfinite(get(pts.front())) && constant_over(pts, get)) return;
  if (constant_over(pts, get)) {
    const double y = f.y(get(pts.front()));
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(y) << "\" " << style
        << "/>\n";
    return;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = get(pts[i]);
    if (!std::isfinite(v)) continue;
    const double y = f.y(v);
    out << "<line x1=\"" << num(f.x(i) - 0.4 * f.step()) << "\" y1=\""
        << num(y) << "\" x2=\"" << num(f.x(i) + 0.4 * f.step()) << "\" y2=\""
        << num(y) << "\" " << style << "/>\n";
  }
}

}  // namespace

std::string render_svg(const ChartSpec& spec) {
  if (spec.points.empty()) throw DomainError("chart needs at least one point");
  const auto& pts = spec.points;

  double lo = 0.0;
  double hi = 0.0;
  for (const auto& p : pts) {
    lo = std::min({lo, p.value, p.center});
    hi = std::max({hi, p.value, p.center, p.primary.upper});
    if (std::isfinite(p.primary.lower)) lo = std::min(lo, p.primary.lower);
    if (p.secondary) {
      hi = std::max(hi, p.secondary->upper);
      if (std::isfinite(p.secondary->lower)) lo = std::min(lo, p.secondary->lower);
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  const Frame f(pts.size(), lo - (lo < 0.0 ? pad : 0.0), hi + pad);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth)
      << "\" height=\"" << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth)
      << ' ' << num(kHeight) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(spec.title)
      << "</text>\n";

  // Axes with five ticks.
  out << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
      << num(kLeft) << "\" y2=\"" << num(kHeight - kBottom) << "\"/>\n"
      << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom)
      << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
      << num(kHeight - kBottom) << "\"/>\n"
      << "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const double y0 = lo - (lo < 0.0 ? pad : 0.0);
  const double y1 = hi + pad;
  for (int t = 0; t <= 4; ++t) {
    const double v = y0 + (y1 - y0) * t / 4.0;
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.y(v) + 4)
        << "\" text-anchor=\"end\">" << format_sig(v, 4) << "</text>\n";
  }
  out << "<text x=\"16\" y=\"" << num(kTop + (kHeight - kTop - kBottom) / 2)
      << "\" transform=\"rotate(-90 16 "
      << num(kTop + (kHeight - kTop - kBottom) / 2)
      << ")\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n"
      << "</g>\n";

  out << "<g id=\"center\">\n";
  draw_level(out, pts, f, [](const ChartPoint& p) { return p.center; },
             "stroke=\"black\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"");
  out << "</g>\n<g id=\"limits-primary\">\n";
  const std::string primary_style = "stroke=\"black\" stroke-width=\"1.5\"";
  draw_level(out, pts, f, [](const ChartPoint& p) { return p.primary.upper; },
             primary_style);
  draw_level(out, pts, f, [](const ChartPoint& p) { return p.primary.lower; },
             primary_style);
  out << "</g>\n";
  if (pts.front().secondary) {
    const std::string secondary_style =
        "stroke=\"#7f7f7f\" stroke-width=\"1.5\" stroke-dasharray=\"3 3\"";
    out << "<g id=\"limits-secondary\">\n";
    draw_level(out, pts, f,
               [](const ChartPoint& p) { return p.secondary->upper; },
               secondary_style);
    draw_level(out, pts, f,
               [](const ChartPoint& p) { return p.secondary->lower; },
               secondary_style);
    out << "</g>\n";
  }

  out << "<g id=\"points\">\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out << "<circle cx=\"" << num(f.x(i)) << "\" cy=\"" << num(f.y(pts[i].value))
        << "\" r=\"3.5\" fill=\"" << fill_for(pts[i].cls) << "\" data-id=\""
        << escape(pts[i].id) << "\" data-class=\"" << to_string(pts[i].cls)
        << "\"/>\n";
  }
  out << "</g>\n";

  const auto counts = count_exceedances(spec);
  const double alpha = 1.0 - spec.primary_level;
  const std::size_t outside =
      counts.above_primary + (spec.two_sided ? counts.below_primary : 0);
  out << "<text x=\"" << num(kLeft) << "\" y=\"" << num(kHeight - 14)
      << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << "outside " << format_sig(100.0 * spec.primary_level, 4)
      << "% limits: observed " << outside << ", expected "
      << format_fixed(expected_exceedance(pts.size(), alpha), 2);
  if (spec.secondary_level) {
    const std::size_t outside2 = counts.above_secondary;
    out << "; above " << format_sig(100.0 * *spec.secondary_level, 4)
        << "% upper: observed " << outside2;
  }
  out << "</text>\n</svg>\n";
  return out.str();
}

std::string chart_points_csv(const ChartSpec& spec) {
  std::ostringstream out;
  out << "id,value,center,lower_primary,upper_primary,lower_secondary,"
         "upper_secondary,class\n";
  for (const auto& p : spec.points) {
    out << p.id << ',' << format_sig(p.value) << ',' << format_sig(p.center)
        << ',' << format_sig(p.primary.lower) << ','
        << format_sig(p.primary.upper) << ',';
    if (p.secondary) {
      out << format_sig(p.secondary->lower) << ','
          << format_sig(p.secondary->upper);
    } else {
      out << ',';
    }
    out << ',' << to_string(p.cls) << '\n';
  }
  return out.str();
}

}  // namespace hclim
