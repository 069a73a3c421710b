#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "hclim/data.hpp"

namespace hclim {

enum class Model { QuasiPoisson, NegBinomial };

/// Pearson dispersion, reported raw (may be below 1).
struct QuasiPoissonDispersion {
  double phi_hat = 0.0;
};

/// kappa = 1 / theta; 0 marks the Poisson boundary.
struct NegBinomialDispersion {
  double kappa_hat = 0.0;
};

using Dispersion = std::variant<QuasiPoissonDispersion, NegBinomialDispersion>;

/// Intercept-only log-link fit with offset ln(n_h); lambda_hat is per offset unit.
struct ModelFit {
  double lambda_hat = 0.0;
  Dispersion dispersion;
  std::size_t clusters = 0;
  double n_bar = 0.0;
  bool converged = false;
  int iterations = 0;
  /// NB log-likelihood at the estimate; NaN for quasi-Poisson fits.
  double log_likelihood = 0.0;

  [[nodiscard]] Model model() const;
  /// Throws DomainError when the fit is of the other model.
  [[nodiscard]] double phi() const;
  [[nodiscard]] double kappa() const;
};

/// lambda_hat = sum(y) / sum(n); phi_hat = Pearson X^2 / (H - 1).
ModelFit fit_quasi_poisson(const HistoricalData& data);

/// Joint ML of (lambda, kappa) for NB2 by profile alternation. When
/// `loglik_path` is given, the log-likelihood after every outer iteration is
/// appended to it.
ModelFit fit_neg_binomial(const HistoricalData& data,
                          std::vector<double>* loglik_path = nullptr);

ModelFit fit_model(Model model, const HistoricalData& data);

/// NB2 log-likelihood with cluster means n_h lambda; kappa = 0 gives the
/// Poisson log-likelihood.
double neg_binomial_loglik(const HistoricalData& data, double lambda,
                           double kappa);

}  // namespace hclim
