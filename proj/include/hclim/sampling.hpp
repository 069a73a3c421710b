#pragma once

#include <cstdint>
#include <vector>

#include "hclim/data.hpp"
#include "hclim/rng.hpp"

namespace hclim {

/// var(Y_h) = phi * n_h * lambda; the gamma-Poisson representation needs
/// phi > 1 strictly.
struct QuasiPoissonParams {
  double lambda = 1.0;
  double phi = 2.0;

  void validate() const;
};

/// NB2: var(Y_h) = n_h lambda (1 + kappa n_h lambda).
struct NegBinParams {
  double lambda = 1.0;
  double kappa = 1.0;

  void validate() const;
};

/// Per cluster: kappa_i = (phi - 1) / (n_i lambda), lambda_i ~ Gamma(1/kappa_i,
/// rate 1/(kappa_i n_i lambda)), y_i ~ Poisson(lambda_i).
std::vector<std::int64_t> sample_quasi_poisson(Rng& rng,
                                               const DesignSpec& design,
                                               const QuasiPoissonParams& params);

/// lambda_i ~ Gamma(1/kappa, rate 1/(kappa n_i lambda)), y_i ~ Poisson(lambda_i).
std::vector<std::int64_t> sample_neg_binomial(Rng& rng,
                                              const DesignSpec& design,
                                              const NegBinParams& params);

/// Plain Poisson counts with means n_i lambda.
std::vector<std::int64_t> sample_poisson(Rng& rng, const DesignSpec& design,
                                         double lambda);

/// Single-draw variants for one cluster with offset n.
std::int64_t draw_quasi_poisson(Rng& rng, double offset,
                                const QuasiPoissonParams& params);
std::int64_t draw_neg_binomial(Rng& rng, double offset,
                               const NegBinParams& params);

DesignSpec sample_uniform_offsets(Rng& rng, std::size_t clusters, double lo,
                                  double hi);

}  // namespace hclim
