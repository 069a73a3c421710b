#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hclim {

/// Known exposures n_1..n_H of a (historical or simulated) design.
class DesignSpec {
 public:
  explicit DesignSpec(std::vector<double> offsets);

  /// H clusters that all share the offset n.
  static DesignSpec constant(std::size_t clusters, double offset);

  [[nodiscard]] std::size_t size() const { return offsets_.size(); }
  [[nodiscard]] std::span<const double> offsets() const { return offsets_; }
  [[nodiscard]] double mean() const;

 private:
  std::vector<double> offsets_;
};

/// Clustered historical counts y_h observed over offsets n_h.
class HistoricalData {
 public:
  HistoricalData(std::vector<std::int64_t> counts, std::vector<double> offsets);

  [[nodiscard]] std::size_t size() const { return counts_.size(); }
  [[nodiscard]] std::span<const std::int64_t> counts() const { return counts_; }
  [[nodiscard]] std::span<const double> offsets() const { return offsets_; }

  [[nodiscard]] std::int64_t total_y() const { return total_y_; }
  [[nodiscard]] double total_n() const { return total_n_; }
  [[nodiscard]] double n_bar() const;
  [[nodiscard]] double mean_count() const;
  [[nodiscard]] bool equal_offsets() const;

  [[nodiscard]] DesignSpec design() const { return DesignSpec(offsets_); }

 private:
  std::vector<std::int64_t> counts_;
  std::vector<double> offsets_;
  std::int64_t total_y_ = 0;
  double total_n_ = 0.0;
};

}  // namespace hclim
