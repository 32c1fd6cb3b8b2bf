#ifndef SELFDEC_RNG_HPP
#define SELFDEC_RNG_HPP

#include <cstddef>
#include <cstdint>

#include "selfdec/kernels.hpp"

namespace selfdec {
namespace rng {

// Seedable, splittable uniform stream. (seed, stream_id) fully determines
// the draw sequence; distinct stream_ids give statistically independent
// streams. The stream is the lane-interleaved output of four xoshiro256++
// generators seeded via SplitMix64, and every consumer (scalar draws or
// bulk fills) advances the same sequence, so results do not depend on the
// granularity of consumption.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Next uniform in (0,1).
  double uniform01();

  // Writes n consecutive uniforms.
  void fill_uniform01(double* dst, std::size_t n);

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate);

  // Standard normal via the Marsaglia polar method (sqrt/arith only, so
  // sequences are reproducible across platforms).
  double normal();

  // Two-sided exponential with density (rate/2) e^{-rate |x|}.
  double laplace(double rate);

  // Poisson count; arrival counting for small means, Hormann's
  // transformed rejection above it.
  std::uint64_t poisson(double mean);

  // Gamma variate with unit rate (Marsaglia-Tsang, with the power boost
  // for shape < 1).
  double gamma(double shape);

  // Fused kernels for the series samplers: sum_i -log(U_i) w[i] and its
  // Bernoulli(accept_p)-masked form. These draw whole lane blocks
  // straight from the generator state; any uniforms still buffered from
  // scalar draws are discarded first, and trailing lanes of a partial
  // final block are consumed and discarded, so the draw count per call
  // is a fixed function of n.
  double series_neg_log_dot(const double* w, std::size_t n);
  double series_neg_log_masked_dot(const double* w, std::size_t n,
                                   double accept_p);

 private:
  void refill();

  kernels::RngLanes lanes_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double buf_[4];
  unsigned buf_pos_;  // 4 means empty
  bool have_spare_normal_;
  double spare_normal_;
};

}  // namespace rng
}  // namespace selfdec

#endif  // SELFDEC_RNG_HPP
