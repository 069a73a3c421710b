#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hclim/limits.hpp"
#include "hclim/prediction.hpp"

namespace hclim {

enum class Generator { QuasiPoisson, NegBinomial };

std::string_view to_string(Generator generator);

/// How offsets are produced for each simulated dataset: all equal to n, or
/// drawn independently from Uniform(lo, hi).
struct OffsetRule {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Fixed;
  double fixed = 3.0;
  double lo = 0.5;
  double hi = 4.0;

  static OffsetRule constant(double n) { return {Kind::Fixed, n, n, n}; }
  static OffsetRule uniform(double lo, double hi) {
    return {Kind::Uniform, 0.0, lo, hi};
  }
  /// Design mean: n for fixed offsets, (lo + hi) / 2 for uniform ones.
  [[nodiscard]] double mean() const;
};

/// One cell of a coverage study.
struct SimCell {
  Generator generator = Generator::QuasiPoisson;
  Method method = Method::CalibratedQuasiPoisson;
  std::size_t clusters = 10;
  double lambda = 5.0;
  double phi = 3.0;
  /// NB generator dispersion; defaults to (phi - 1) / (nbar lambda).
  std::optional<double> kappa;
  OffsetRule offsets;
  /// Fixed n* for every replicate. When absent, n* equals the fixed offset,
  /// or is drawn fresh from the uniform offset law.
  std::optional<double> n_star;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::TwoSided;
  /// Heuristic multiplier; defaults to z_{1-alpha/2}.
  std::optional<double> k;
  std::size_t replicates = 500;
  std::size_t bootstrap_samples = 2000;
  double tolerance = 0.001;
  NbVarianceVariant variant = NbVarianceVariant::MainText;
  std::uint64_t seed = 1;

  void validate() const;
  /// The NB generator's kappa.
  [[nodiscard]] double generator_kappa() const;
};

/// Coverage of the interval, its lower bound and its upper bound over the
/// replicates whose limits could be computed (s_used of s_total).
struct CoverageReport {
  double psi_cp = 0.0;
  double psi_l = 0.0;
  double psi_u = 0.0;
  std::size_t s_used = 0;
  std::size_t s_total = 0;
};

/// Replicate s draws from substream combine_ids(cell_index, s) of cell.seed.
CoverageReport run_cell(const SimCell& cell, std::size_t cell_index = 0);

struct GridRow {
  SimCell cell;
  std::optional<CoverageReport> report;
  std::string error;
};

/// Runs every cell; a failing cell records its error and the grid continues.
std::vector<GridRow> run_grid(const std::vector<SimCell>& cells);

/// Long-format CSV: generator, method, H, lambda, phi, offset_lo, offset_hi,
/// n_star, alpha, S_used, S_total, psi_cp, psi_l, psi_u (plus sides, error).
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

}  // namespace hclim
