#include "hclim/data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hclim/error.hpp"

namespace hclim {
namespace {

void check_offsets(std::span<const double> offsets) {
  if (offsets.empty()) throw DomainError("design needs at least one cluster");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (!std::isfinite(offsets[i]) || offsets[i] <= 0.0) {
      throw DomainError("offset " + std::to_string(i + 1) +
                        " must be finite and positive");
    }
  }
}

}  // namespace

DesignSpec::DesignSpec(std::vector<double> offsets)
    : offsets_(std::move(offsets)) {
  check_offsets(offsets_);
}

DesignSpec DesignSpec::constant(std::size_t clusters, double offset) {
  return DesignSpec(std::vector<double>(clusters, offset));
}

double DesignSpec::mean() const {
  double sum = 0.0;
  for (double n : offsets_) sum += n;
  return sum / static_cast<double>(offsets_.size());
}

HistoricalData::HistoricalData(std::vector<std::int64_t> counts,
                               std::vector<double> offsets)
    : counts_(std::move(counts)), offsets_(std::move(offsets)) {
  if (counts_.size() != offsets_.size()) {
    throw DomainError("counts and offsets differ in length");
  }
  check_offsets(offsets_);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) {
      throw DomainError("count " + std::to_string(i + 1) + " is negative");
    }
    total_y_ += counts_[i];
    total_n_ += offsets_[i];
  }
}

double HistoricalData::n_bar() const {
  return total_n_ / static_cast<double>(size());
}

double HistoricalData::mean_count() const {
  return static_cast<double>(total_y_) / static_cast<double>(size());
}

bool HistoricalData::equal_offsets() const {
  return std::all_of(offsets_.begin(), offsets_.end(),
                     [&](double n) { return n == offsets_.front(); });
}

}  // namespace hclim
