#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "hclim/estimation.hpp"
#include "hclim/limits.hpp"

namespace hclim {

enum class Sidedness { TwoSided, UpperOnly };

/// The future observation: counted over n_star offset units, to be covered
/// with probability 1 - alpha.
struct TargetDesign {
  double n_star = 1.0;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::TwoSided;

  void validate() const;
  /// z_{1-alpha/2} for two-sided targets, z_{1-alpha} for upper-only ones.
  [[nodiscard]] double z() const;
};

/// se^2 = var(n* lambda-hat) + var(Y*).
struct PredictionStdErr {
  double var_estimation = 0.0;
  double var_future = 0.0;
  double se = 0.0;
};

/// Two forms of var(lambda-hat) under NB2:
///   MainText:   (lambda + kappa nbar lambda)   / (nbar H)
///   Supplement: (lambda + kappa nbar lambda^2) / (nbar H)
/// MainText is the default.
enum class NbVarianceVariant { MainText, Supplement };

std::string_view to_string(NbVarianceVariant variant);
std::optional<NbVarianceVariant> parse_variant(std::string_view name);

PredictionStdErr quasi_poisson_stderr(double lambda, double phi, double n_bar,
                                      std::size_t clusters, double n_star);

PredictionStdErr neg_binomial_stderr(double lambda, double kappa, double n_bar,
                                     std::size_t clusters, double n_star,
                                     NbVarianceVariant variant);

/// Standard error matching the fit's model; quasi-Poisson clamps phi at 1.
PredictionStdErr prediction_stderr(const ModelFit& fit, double n_star,
                                   NbVarianceVariant variant);

/// Limits center - q_lower se, center + q_upper se on the response scale; a
/// missing q_lower yields an upper-only limit.
PredictionLimits limits_from_coefficients(Method method, double alpha,
                                          double center, double se,
                                          std::optional<double> q_lower,
                                          double q_upper);

struct PredictionInterval {
  PredictionLimits limits;
  PredictionStdErr stderr_parts;
};

/// Single-cluster Poisson interval from y events over offset n.
PredictionInterval simple_poisson_pi(std::int64_t y, double n,
                                     const TargetDesign& target);

/// n* lambda -/+ z sqrt(n*^2 phi lambda / (nbar H) + n* phi lambda), phi
/// clamped to at least 1.
PredictionInterval quasi_poisson_pi(const ModelFit& fit,
                                    const TargetDesign& target);

PredictionInterval neg_binomial_pi(
    const ModelFit& fit, const TargetDesign& target,
    NbVarianceVariant variant = NbVarianceVariant::MainText);

}  // namespace hclim
