#pragma once

#include <cstdint>

namespace hclim {

/// Seed plus substream selector. Two generators built from equal states
/// produce identical sequences; distinct stream ids give independent streams.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

/// Counter-based generator: the i-th output is a keyed bijective mix of i,
/// with the key derived from (seed, stream_id). Cheap to construct, so every
/// bootstrap replicate or simulation replicate gets its own instance.
class Rng {
 public:
  explicit Rng(RngState state);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  [[nodiscard]] RngState state() const { return state_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  RngState state_;
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless 64-bit combiner used to derive substream ids, e.g. from
/// (cell index, replicate index).
std::uint64_t combine_ids(std::uint64_t a, std::uint64_t b);

/// Gamma law in the rate parameterization: mean = shape / rate,
/// variance = shape / rate^2.
struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;

  void validate() const;
};

double gamma_sample(Rng& rng, const GammaParams& params);

/// Exact Poisson variate: sequential inversion below mean 10, Hormann's
/// transformed rejection (PTRS) above.
std::int64_t poisson_sample(Rng& rng, double mean);

double uniform_sample(Rng& rng, double lo, double hi);

}  // namespace hclim
