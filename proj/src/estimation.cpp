#include "hclim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hclim/error.hpp"
#include "hclim/special.hpp"

namespace hclim {

Model ModelFit::model() const {
  return std::holds_alternative<QuasiPoissonDispersion>(dispersion)
             ? Model::QuasiPoisson
             : Model::NegBinomial;
}

double ModelFit::phi() const {
  if (const auto* d = std::get_if<QuasiPoissonDispersion>(&dispersion)) {
    return d->phi_hat;
  }
  throw DomainError("fit does not carry a quasi-Poisson dispersion");
}

double ModelFit::kappa() const {
  if (const auto* d = std::get_if<NegBinomialDispersion>(&dispersion)) {
    return d->kappa_hat;
  }
  throw DomainError("fit does not carry a negative-binomial dispersion");
}

namespace {

void require_dispersion_data(const HistoricalData& data) {
  if (data.size() < 2) {
    throw DomainError("dispersion estimate needs at least 2 clusters");
  }
  if (data.total_y() == 0) throw AllZeroSample();
}

}  // namespace

ModelFit fit_quasi_poisson(const HistoricalData& data) {
  require_dispersion_data(data);
  const double lambda =
      static_cast<double>(data.total_y()) / data.total_n();
  const auto y = data.counts();
  const auto n = data.offsets();
  double pearson = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double mu = n[h] * lambda;
    const double r = static_cast<double>(y[h]) - mu;
    pearson += r * r / mu;
  }
  ModelFit fit;
  fit.lambda_hat = lambda;
  fit.dispersion = QuasiPoissonDispersion{
      pearson / static_cast<double>(data.size() - 1)};
  fit.clusters = data.size();
  fit.n_bar = data.n_bar();
  fit.converged = true;
  fit.iterations = 0;
  fit.log_likelihood = std::numeric_limits<double>::quiet_NaN();
  return fit;
}

namespace {

constexpr double kThetaMin = 1e-8;
constexpr double kThetaMax = 1e8;
constexpr std::int64_t kExactSumLimit = 2000;
constexpr int kMaxOuter = 50;
constexpr double kLoglikTol = 1e-8;

// log Gamma(y + theta) - log Gamma(theta) - y log(theta + mu), kept accurate
// for large theta by summing log1p terms.
double gamma_ratio_term(std::int64_t y, double theta, double mu) {
  if (y <= kExactSumLimit) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < y; ++j) {
      acc += std::log1p((static_cast<double>(j) - mu) / (theta + mu));
    }
    return acc;
  }
  const double yd = static_cast<double>(y);
  return std::lgamma(yd + theta) - std::lgamma(theta) -
         yd * std::log(theta + mu);
}

// psi(y + theta) - psi(theta) and its derivative in theta.
struct DigammaDiff {
  double value;
  double derivative;
};

DigammaDiff digamma_diff(std::int64_t y, double theta) {
  if (y <= kExactSumLimit) {
    double v = 0.0;
    double d = 0.0;
    for (std::int64_t j = 0; j < y; ++j) {
      const double inv = 1.0 / (theta + static_cast<double>(j));
      v += inv;
      d -= inv * inv;
    }
    return {v, d};
  }
  const double yd = static_cast<double>(y);
  return {digamma(yd + theta) - digamma(theta),
          trigamma(yd + theta) - trigamma(theta)};
}

struct ThetaScore {
  double score;       // d loglik / d theta
  double derivative;  // d score / d theta
};

ThetaScore theta_score(const HistoricalData& data, double lambda,
                       double theta) {
  const auto y = data.counts();
  const auto n = data.offsets();
  double s = 0.0;
  double ds = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double mu = n[h] * lambda;
    const double yd = static_cast<double>(y[h]);
    const auto dd = digamma_diff(y[h], theta);
    const double tm = theta + mu;
    s += dd.value - std::log1p(mu / theta) + (mu - yd) / tm;
    ds += dd.derivative + mu / (theta * tm) - (mu - yd) / (tm * tm);
  }
  return {s, ds};
}

struct ThetaSolution {
  double kappa;
  bool ok;
};

// Maximizes the NB log-likelihood over theta = 1/kappa with lambda held fixed.
ThetaSolution solve_theta(const HistoricalData& data, double lambda) {
  const auto y = data.counts();
  const auto n = data.offsets();
  double excess = 0.0;
  double mu_sq = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double mu = n[h] * lambda;
    const double r = static_cast<double>(y[h]) - mu;
    excess += r * r - static_cast<double>(y[h]);
    mu_sq += mu * mu;
  }
  // The score behaves like -excess / (2 theta^2) for large theta, so without
  // excess variation the likelihood keeps rising towards the Poisson limit.
  if (excess <= 0.0) return {0.0, true};

  const double log_min = std::log(kThetaMin);
  const double log_max = std::log(kThetaMax);
  const double step = std::log(4.0);
  double t = std::clamp(std::log(mu_sq / excess), log_min, log_max);
  double t_lo = 0.0;
  double t_hi = 0.0;
  double s = theta_score(data, lambda, std::exp(t)).score;
  if (s == 0.0) return {std::exp(-t), true};
  if (s > 0.0) {
    t_lo = t;
    for (;;) {
      t += step;
      if (t > log_max) return {0.0, true};
      if (theta_score(data, lambda, std::exp(t)).score < 0.0) break;
      t_lo = t;
    }
    t_hi = t;
  } else {
    t_hi = t;
    for (;;) {
      t -= step;
      if (t < log_min) return {1.0 / kThetaMin, false};
      if (theta_score(data, lambda, std::exp(t)).score > 0.0) break;
      t_hi = t;
    }
    t_lo = t;
  }

  t = 0.5 * (t_lo + t_hi);
  for (int i = 0; i < 200; ++i) {
    const double theta = std::exp(t);
    const auto sc = theta_score(data, lambda, theta);
    if (sc.score == 0.0) break;
    if (sc.score > 0.0) {
      t_lo = t;
    } else {
      t_hi = t;
    }
    const double slope = theta * sc.derivative;
    double next = slope < 0.0 ? t - sc.score / slope : 0.5 * (t_lo + t_hi);
    if (!(next > t_lo && next < t_hi)) next = 0.5 * (t_lo + t_hi);
    const bool done = std::fabs(next - t) < 1e-13 * (1.0 + std::fabs(t)) ||
                      t_hi - t_lo < 1e-13 * (1.0 + std::fabs(t));
    t = next;
    if (done) break;
  }
  return {std::exp(-t), true};
}

// Root of sum (y - mu) / (1 + kappa mu) in beta = log lambda. The function is
// strictly decreasing in beta.
double solve_lambda(const HistoricalData& data, double kappa,
                    double lambda_init) {
  const auto y = data.counts();
  const auto n = data.offsets();
  double min_rate = std::numeric_limits<double>::infinity();
  double max_rate = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double rate = static_cast<double>(y[h]) / n[h];
    min_rate = std::min(min_rate, rate);
    max_rate = std::max(max_rate, rate);
  }
  if (kappa == 0.0 || min_rate == max_rate) {
    return static_cast<double>(data.total_y()) / data.total_n();
  }
  double b_hi = std::log(max_rate);
  double b_lo = min_rate > 0.0 ? std::log(min_rate) : b_hi - 60.0;
  double beta = std::clamp(std::log(lambda_init), b_lo, b_hi);
  for (int i = 0; i < 200; ++i) {
    const double lambda = std::exp(beta);
    double g = 0.0;
    double dg = 0.0;
    for (std::size_t h = 0; h < data.size(); ++h) {
      const double mu = n[h] * lambda;
      const double yd = static_cast<double>(y[h]);
      const double w = 1.0 + kappa * mu;
      g += (yd - mu) / w;
      dg -= mu * (1.0 + kappa * yd) / (w * w);
    }
    if (g == 0.0) break;
    if (g > 0.0) {
      b_lo = beta;
    } else {
      b_hi = beta;
    }
    double next = beta - g / dg;
    if (!(next > b_lo && next < b_hi)) next = 0.5 * (b_lo + b_hi);
    const bool done = std::fabs(next - beta) < 1e-14 * (1.0 + std::fabs(beta));
    beta = next;
    if (done || b_hi - b_lo < 1e-15) break;
  }
  return std::exp(beta);
}

}  // namespace

double neg_binomial_loglik(const HistoricalData& data, double lambda,
                           double kappa) {
  const auto y = data.counts();
  const auto n = data.offsets();
  double ll = 0.0;
  for (std::size_t h = 0; h < data.size(); ++h) {
    const double mu = n[h] * lambda;
    const double yd = static_cast<double>(y[h]);
    const double y_log_mu = y[h] == 0 ? 0.0 : yd * std::log(mu);
    ll -= std::lgamma(yd + 1.0);
    if (kappa == 0.0) {
      ll += y_log_mu - mu;
      continue;
    }
    const double theta = 1.0 / kappa;
    ll += gamma_ratio_term(y[h], theta, mu) + y_log_mu -
          theta * std::log1p(mu / theta);
  }
  return ll;
}

ModelFit fit_neg_binomial(const HistoricalData& data,
                          std::vector<double>* loglik_path) {
  require_dispersion_data(data);
  double lambda = static_cast<double>(data.total_y()) / data.total_n();
  double kappa = 0.0;
  double ll_prev = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iter = 0;
  double ll = ll_prev;
  while (iter < kMaxOuter) {
    ++iter;
    const auto theta_step = solve_theta(data, lambda);
    kappa = theta_step.kappa;
    if (!theta_step.ok) {
      ll = neg_binomial_loglik(data, lambda, kappa);
      if (loglik_path) loglik_path->push_back(ll);
      break;
    }
    lambda = solve_lambda(data, kappa, lambda);
    ll = neg_binomial_loglik(data, lambda, kappa);
    if (loglik_path) loglik_path->push_back(ll);
    if (std::fabs(ll - ll_prev) < kLoglikTol) {
      converged = true;
      break;
    }
    ll_prev = ll;
  }

  ModelFit fit;
  fit.lambda_hat = lambda;
  fit.dispersion = NegBinomialDispersion{kappa};
  fit.clusters = data.size();
  fit.n_bar = data.n_bar();
  fit.converged = converged;
  fit.iterations = iter;
  fit.log_likelihood = ll;
  return fit;
}

ModelFit fit_model(Model model, const HistoricalData& data) {
  return model == Model::QuasiPoisson ? fit_quasi_poisson(data)
                                      : fit_neg_binomial(data);
}

}  // namespace hclim
