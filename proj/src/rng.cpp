#include "hclim/rng.hpp"

#include <cmath>
#include <string>

#include "hclim/error.hpp"

namespace hclim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t combine_ids(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a + kGolden) ^ (b * kGolden + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(RngState state)
    : state_(state),
      key0_(mix64(state.seed + kGolden)),
      key1_(mix64(state.stream_id ^ mix64(key0_ + 0xD1B54A32D192ED03ULL))) {}

std::uint64_t Rng::next_u64() {
  const std::uint64_t x = counter_++;
  std::uint64_t z = mix64(x ^ key0_);
  z = mix64(z + key1_);
  return mix64(z ^ key0_);
}

double Rng::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void GammaParams::validate() const {
  if (!std::isfinite(shape) || !std::isfinite(rate) || shape <= 0.0 ||
      rate <= 0.0) {
    throw DomainError("gamma parameters must be finite and positive (shape=" +
                      std::to_string(shape) +
                      ", rate=" + std::to_string(rate) + ")");
  }
}

namespace {

// Marsaglia & Tsang for shape >= 1, unit rate.
double gamma_unit_rate(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double gamma_sample(Rng& rng, const GammaParams& params) {
  params.validate();
  if (params.shape >= 1.0) {
    return gamma_unit_rate(rng, params.shape) / params.rate;
  }
  // Boost for shape < 1: G(a) = G(a + 1) * U^(1/a). Computed on the log
  // scale; very small shapes can still underflow to 0.
  const double g = gamma_unit_rate(rng, params.shape + 1.0);
  const double log_u = std::log(rng.uniform());
  return std::exp(std::log(g) + log_u / params.shape) / params.rate;
}

std::int64_t poisson_sample(Rng& rng, double mean) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw DomainError("Poisson mean must be finite and non-negative (got " +
                      std::to_string(mean) + ")");
  }
  if (mean == 0.0) return 0;

  if (mean < 10.0) {
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    // The cap only matters if rounding leaves cdf a hair below u near 1.
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  // PTRS, Hormann (1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kf * loglam - std::lgamma(kf + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

double uniform_sample(Rng& rng, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("uniform bounds require lo < hi");
  }
  return lo + (hi - lo) * rng.uniform();
}

}  // namespace hclim
