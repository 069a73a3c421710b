#include "hclim/sampling.hpp"

#include <cmath>
#include <string>

#include "hclim/error.hpp"

namespace hclim {

void QuasiPoissonParams::validate() const {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("quasi-Poisson lambda must be positive");
  }
  if (!std::isfinite(phi) || phi <= 1.0) {
    throw DomainError("quasi-Poisson sampling requires phi > 1 (got " +
                      std::to_string(phi) + ")");
  }
}

void NegBinParams::validate() const {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("negative-binomial lambda must be positive");
  }
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw DomainError("negative-binomial sampling requires kappa > 0 (got " +
                      std::to_string(kappa) + ")");
  }
}

namespace {

std::int64_t gamma_poisson(Rng& rng, double mean, double kappa) {
  const double shape = 1.0 / kappa;
  const double rate = 1.0 / (kappa * mean);
  return poisson_sample(rng, gamma_sample(rng, {shape, rate}));
}

}  // namespace

std::int64_t draw_quasi_poisson(Rng& rng, double offset,
                                const QuasiPoissonParams& params) {
  const double mean = offset * params.lambda;
  return gamma_poisson(rng, mean, (params.phi - 1.0) / mean);
}

std::int64_t draw_neg_binomial(Rng& rng, double offset,
                               const NegBinParams& params) {
  return gamma_poisson(rng, offset * params.lambda, params.kappa);
}

std::vector<std::int64_t> sample_quasi_poisson(
    Rng& rng, const DesignSpec& design, const QuasiPoissonParams& params) {
  params.validate();
  std::vector<std::int64_t> out;
  out.reserve(design.size());
  for (double n : design.offsets()) out.push_back(draw_quasi_poisson(rng, n, params));
  return out;
}

std::vector<std::int64_t> sample_neg_binomial(Rng& rng,
                                              const DesignSpec& design,
                                              const NegBinParams& params) {
  params.validate();
  std::vector<std::int64_t> out;
  out.reserve(design.size());
  for (double n : design.offsets()) out.push_back(draw_neg_binomial(rng, n, params));
  return out;
}

std::vector<std::int64_t> sample_poisson(Rng& rng, const DesignSpec& design,
                                         double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("Poisson lambda must be non-negative");
  }
  std::vector<std::int64_t> out;
  out.reserve(design.size());
  for (double n : design.offsets()) out.push_back(poisson_sample(rng, n * lambda));
  return out;
}

DesignSpec sample_uniform_offsets(Rng& rng, std::size_t clusters, double lo,
                                  double hi) {
  if (clusters == 0) throw DomainError("need at least one cluster");
  if (!(lo > 0.0)) throw DomainError("offset lower bound must be positive");
  if (!(lo < hi)) throw DomainError("offset bounds require lo < hi");
  std::vector<double> offsets;
  offsets.reserve(clusters);
  for (std::size_t i = 0; i < clusters; ++i) {
    offsets.push_back(uniform_sample(rng, lo, hi));
  }
  return DesignSpec(std::move(offsets));
}

}  // namespace hclim
