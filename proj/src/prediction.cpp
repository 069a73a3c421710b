#include "hclim/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hclim/error.hpp"
#include "hclim/special.hpp"

namespace hclim {

void TargetDesign::validate() const {
  if (!std::isfinite(n_star) || n_star <= 0.0) {
    throw DomainError("n* must be finite and positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
}

double TargetDesign::z() const {
  return sidedness == Sidedness::TwoSided ? normal_quantile(1.0 - alpha / 2.0)
                                          : normal_quantile(1.0 - alpha);
}

std::string_view to_string(NbVarianceVariant variant) {
  return variant == NbVarianceVariant::MainText ? "main-text" : "supplement";
}

std::optional<NbVarianceVariant> parse_variant(std::string_view name) {
  if (name == "main-text") return NbVarianceVariant::MainText;
  if (name == "supplement") return NbVarianceVariant::Supplement;
  return std::nullopt;
}

namespace {

PredictionStdErr combine(double var_estimation, double var_future) {
  return {var_estimation, var_future, std::sqrt(var_estimation + var_future)};
}

void check_common(double lambda, double n_bar, std::size_t clusters,
                  double n_star) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("lambda-hat must be positive");
  }
  if (clusters < 1) throw DomainError("need at least one historical cluster");
  if (!std::isfinite(n_bar) || n_bar <= 0.0) {
    throw DomainError("mean offset must be positive");
  }
  if (!std::isfinite(n_star) || n_star <= 0.0) {
    throw DomainError("n* must be positive");
  }
}

}  // namespace

PredictionStdErr quasi_poisson_stderr(double lambda, double phi, double n_bar,
                                      std::size_t clusters, double n_star) {
  check_common(lambda, n_bar, clusters, n_star);
  if (!std::isfinite(phi) || phi < 0.0) {
    throw DomainError("phi-hat must be non-negative");
  }
  const double h = static_cast<double>(clusters);
  return combine(n_star * n_star * phi * lambda / (n_bar * h),
                 n_star * phi * lambda);
}

PredictionStdErr neg_binomial_stderr(double lambda, double kappa, double n_bar,
                                     std::size_t clusters, double n_star,
                                     NbVarianceVariant variant) {
  check_common(lambda, n_bar, clusters, n_star);
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw DomainError("kappa-hat must be non-negative");
  }
  const double h = static_cast<double>(clusters);
  const double extra = variant == NbVarianceVariant::MainText
                           ? kappa * n_bar * lambda
                           : kappa * n_bar * lambda * lambda;
  const double var_lambda = (lambda + extra) / (n_bar * h);
  return combine(n_star * n_star * var_lambda,
                 n_star * lambda * (1.0 + kappa * n_star * lambda));
}

PredictionStdErr prediction_stderr(const ModelFit& fit, double n_star,
                                   NbVarianceVariant variant) {
  if (fit.model() == Model::QuasiPoisson) {
    return quasi_poisson_stderr(fit.lambda_hat, std::max(fit.phi(), 1.0),
                                fit.n_bar, fit.clusters, n_star);
  }
  return neg_binomial_stderr(fit.lambda_hat, fit.kappa(), fit.n_bar,
                             fit.clusters, n_star, variant);
}

PredictionLimits limits_from_coefficients(Method method, double alpha,
                                          double center, double se,
                                          std::optional<double> q_lower,
                                          double q_upper) {
  const double lower = q_lower ? center - *q_lower * se
                               : -std::numeric_limits<double>::infinity();
  return make_limits(method, Scale::Response, alpha, center, lower,
                     center + q_upper * se);
}

namespace {

PredictionLimits z_limits(Method method, const TargetDesign& target,
                          double center, double se) {
  const double z = target.z();
  std::optional<double> q_lower;
  if (target.sidedness == Sidedness::TwoSided) q_lower = z;
  return limits_from_coefficients(method, target.alpha, center, se, q_lower,
                                  z);
}

}  // namespace

PredictionInterval simple_poisson_pi(std::int64_t y, double n,
                                     const TargetDesign& target) {
  target.validate();
  if (y < 0) throw DomainError("count must be non-negative");
  if (!std::isfinite(n) || n <= 0.0) throw DomainError("offset must be positive");
  const double lambda = static_cast<double>(y) / n;
  const double n_star = target.n_star;
  const auto parts = combine(n_star * n_star * lambda / n, n_star * lambda);
  auto limits = z_limits(Method::SimplePoisson, target, n_star * lambda, parts.se);
  limits.degenerate = y == 0;
  return {limits, parts};
}

PredictionInterval quasi_poisson_pi(const ModelFit& fit,
                                    const TargetDesign& target) {
  target.validate();
  if (fit.model() != Model::QuasiPoisson) {
    throw DomainError("quasi-Poisson interval needs a quasi-Poisson fit");
  }
  const auto parts =
      prediction_stderr(fit, target.n_star, NbVarianceVariant::MainText);
  return {z_limits(Method::QuasiPoisson, target,
                   target.n_star * fit.lambda_hat, parts.se),
          parts};
}

PredictionInterval neg_binomial_pi(const ModelFit& fit,
                                   const TargetDesign& target,
                                   NbVarianceVariant variant) {
  target.validate();
  if (fit.model() != Model::NegBinomial) {
    throw DomainError("negative-binomial interval needs a negative-binomial fit");
  }
  if (!fit.converged) {
    throw NumericalError("negative-binomial fit did not converge");
  }
  const auto parts = prediction_stderr(fit, target.n_star, variant);
  return {z_limits(Method::NegBinomial, target,
                   target.n_star * fit.lambda_hat, parts.se),
          parts};
}

}  // namespace hclim
