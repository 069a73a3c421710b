#include "hclim/coverage.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "hclim/calibration.hpp"
#include "hclim/error.hpp"
#include "hclim/estimation.hpp"
#include "hclim/format.hpp"
#include "hclim/heuristic.hpp"
#include "hclim/parallel.hpp"
#include "hclim/rng.hpp"
#include "hclim/sampling.hpp"

namespace hclim {

std::string_view to_string(Generator generator) {
  return generator == Generator::QuasiPoisson ? "qp" : "nb";
}

double OffsetRule::mean() const {
  return kind == Kind::Fixed ? fixed : 0.5 * (lo + hi);
}

double SimCell::generator_kappa() const {
  if (kappa) return *kappa;
  return (phi - 1.0) / (offsets.mean() * lambda);
}

namespace {

bool is_calibrated(Method m) {
  return m == Method::CalibratedQuasiPoisson ||
         m == Method::CalibratedNegBinomial;
}

bool is_rate_chart(Method m) {
  return m == Method::UChart || m == Method::LaneyUChart;
}

}  // namespace

void SimCell::validate() const {
  if (clusters < 2) throw DomainError("simulation needs H >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("simulation lambda must be positive");
  }
  if (replicates < 1) throw DomainError("simulation needs S >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (offsets.kind == OffsetRule::Kind::Fixed) {
    if (!(offsets.fixed > 0.0)) throw DomainError("offset must be positive");
  } else if (!(offsets.lo > 0.0 && offsets.lo < offsets.hi)) {
    throw DomainError("uniform offsets need 0 < lo < hi");
  }
  if (n_star && !(*n_star > 0.0)) throw DomainError("n* must be positive");
  if (k && !(*k > 0.0)) throw DomainError("k must be positive");
  if (generator == Generator::QuasiPoisson) {
    QuasiPoissonParams{lambda, phi}.validate();
  } else {
    NegBinParams{lambda, generator_kappa()}.validate();
  }
  if ((method == Method::MeanSd || method == Method::CChart) &&
      offsets.kind != OffsetRule::Kind::Fixed) {
    throw DomainError(std::string(to_string(method)) +
                      " requires equal offsets");
  }
  if (is_calibrated(method) && bootstrap_samples < 100) {
    throw DomainError("calibrated methods need B >= 100");
  }
}

namespace {

struct Outcome {
  bool used = false;
  bool lower_ok = false;
  bool upper_ok = false;
};

PredictionLimits compute_limits(const SimCell& cell, std::size_t cell_index,
                                std::size_t replicate,
                                const HistoricalData& data,
                                const TargetDesign& target) {
  const double k = cell.k.value_or(target.z());
  switch (cell.method) {
    case Method::MeanSd:
      return mean_sd_limits(data, k);
    case Method::CChart:
      return c_chart_limits(data, k);
    case Method::UChart:
      return u_chart_limits(data, k, target.n_star);
    case Method::LaneyUChart:
      return laney_u_chart_limits(data, k, target.n_star).limits;
    case Method::SimplePoisson:
      return simple_poisson_pi(data.total_y(), data.total_n(), target).limits;
    case Method::QuasiPoisson:
      return quasi_poisson_pi(fit_quasi_poisson(data), target).limits;
    case Method::NegBinomial: {
      const auto fit = fit_neg_binomial(data);
      if (!fit.converged) throw NumericalError("NB fit did not converge");
      return neg_binomial_pi(fit, target, cell.variant).limits;
    }
    case Method::CalibratedQuasiPoisson:
    case Method::CalibratedNegBinomial: {
      CalibrationSettings settings;
      settings.bootstrap_samples = cell.bootstrap_samples;
      settings.tolerance = cell.tolerance;
      settings.variant = cell.variant;
      settings.seed = RngState{combine_ids(cell.seed, 0xB0075EEDULL),
                               combine_ids(cell_index, replicate)};
      const Model model = cell.method == Method::CalibratedQuasiPoisson
                              ? Model::QuasiPoisson
                              : Model::NegBinomial;
      const auto fit = fit_model(model, data);
      if (!fit.converged) throw NumericalError("fit did not converge");
      return calibrate_fit(fit, data.design(), target, settings).limits;
    }
  }
  throw DomainError("unknown method");
}

Outcome run_replicate(const SimCell& cell, std::size_t cell_index,
                      std::size_t replicate) {
  Rng rng(RngState{cell.seed, combine_ids(cell_index, replicate)});
  const bool uniform = cell.offsets.kind == OffsetRule::Kind::Uniform;
  const DesignSpec design =
      uniform ? sample_uniform_offsets(rng, cell.clusters, cell.offsets.lo,
                                       cell.offsets.hi)
              : DesignSpec::constant(cell.clusters, cell.offsets.fixed);
  double n_star = cell.offsets.fixed;
  if (cell.n_star) {
    n_star = *cell.n_star;
  } else if (uniform) {
    n_star = uniform_sample(rng, cell.offsets.lo, cell.offsets.hi);
  }

  std::vector<std::int64_t> counts;
  std::int64_t y_star = 0;
  if (cell.generator == Generator::QuasiPoisson) {
    const QuasiPoissonParams params{cell.lambda, cell.phi};
    counts = sample_quasi_poisson(rng, design, params);
    y_star = draw_quasi_poisson(rng, n_star, params);
  } else {
    const NegBinParams params{cell.lambda, cell.generator_kappa()};
    counts = sample_neg_binomial(rng, design, params);
    y_star = draw_neg_binomial(rng, n_star, params);
  }
  const HistoricalData data(std::move(counts),
                            std::vector<double>(design.offsets().begin(),
                                                design.offsets().end()));
  const TargetDesign target{n_star, cell.alpha, cell.sidedness};

  PredictionLimits limits;
  try {
    limits = compute_limits(cell, cell_index, replicate, data, target);
  } catch (const NumericalError&) {
    return {};
  }
  if (cell.sidedness == Sidedness::UpperOnly) {
    limits.lower = -std::numeric_limits<double>::infinity();
  }
  const double t = is_rate_chart(cell.method)
                       ? static_cast<double>(y_star) / n_star
                       : static_cast<double>(y_star);
  return {true, limits.lower <= t, t <= limits.upper};
}

}  // namespace

CoverageReport run_cell(const SimCell& cell, std::size_t cell_index) {
  cell.validate();
  std::vector<Outcome> outcomes(cell.replicates);
  parallel_for(cell.replicates, [&](std::size_t s) {
    outcomes[s] = run_replicate(cell, cell_index, s);
  });

  CoverageReport report;
  report.s_total = cell.replicates;
  std::size_t both = 0;
  std::size_t lower = 0;
  std::size_t upper = 0;
  for (const auto& o : outcomes) {
    if (!o.used) continue;
    ++report.s_used;
    lower += o.lower_ok ? 1 : 0;
    upper += o.upper_ok ? 1 : 0;
    both += (o.lower_ok && o.upper_ok) ? 1 : 0;
  }
  if (report.s_used == 0) {
    throw NumericalError("no replicate produced usable limits");
  }
  const double used = static_cast<double>(report.s_used);
  report.psi_cp = static_cast<double>(both) / used;
  report.psi_l = static_cast<double>(lower) / used;
  report.psi_u = static_cast<double>(upper) / used;
  return report;
}

std::vector<GridRow> run_grid(const std::vector<SimCell>& cells) {
  std::vector<GridRow> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    GridRow row{cells[i], std::nullopt, {}};
    try {
      row.report = run_cell(cells[i], i);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "generator,method,H,lambda,phi,offset_lo,offset_hi,n_star,alpha,"
         "S_used,S_total,psi_cp,psi_l,psi_u\n";
  for (const auto& row : rows) {
    const auto& c = row.cell;
    const bool uniform = c.offsets.kind == OffsetRule::Kind::Uniform;
    std::string n_star = "uniform";
    if (c.n_star) {
      n_star = format_sig(*c.n_star);
    } else if (!uniform) {
      n_star = format_sig(c.offsets.fixed);
    }
    out << to_string(c.generator) << ',' << to_string(c.method) << ','
        << c.clusters << ',' << format_sig(c.lambda) << ','
        << format_sig(c.phi) << ','
        << format_sig(uniform ? c.offsets.lo : c.offsets.fixed) << ','
        << format_sig(uniform ? c.offsets.hi : c.offsets.fixed) << ','
        << n_star << ',' << format_sig(c.alpha) << ',';
    if (row.report) {
      const auto& r = *row.report;
      out << r.s_used << ',' << r.s_total << ',' << format_sig(r.psi_cp)
          << ',' << format_sig(r.psi_l) << ',' << format_sig(r.psi_u);
    } else {
      out << "0," << c.replicates << ",,,";
    }
    out << '\n';
  }
}

}  // namespace hclim
