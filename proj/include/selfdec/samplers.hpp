#ifndef SELFDEC_SAMPLERS_HPP
#define SELFDEC_SAMPLERS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "selfdec/charfn.hpp"
#include "selfdec/rng.hpp"

namespace selfdec {
namespace samplers {

// Truncation of the random series representations. With
// tail_mean_correction the deterministic mean of the omitted terms is
// added back, so the truncated law keeps the exact mean at any
// truncation; what remains is a variance deficit of
// trigamma(alpha + N + 1).
struct SeriesConfig {
  int truncation_n = 10'000;
  bool tail_mean_correction = true;
};

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::string generator_tag;
  std::size_t size() const { return values.size(); }
};

// All samplers draw exclusively from the given stream, so identical
// (seed, stream_id, config) reproduce batches bit for bit. Large batches
// can be partitioned across distinct stream_ids and merged in
// (stream_id, index) order; a single stream must not be shared across
// threads.

// Compound-Poisson background driving variable of Gamma(alpha, lambda):
// a Poisson(alpha) count of Exponential(lambda) summands, exactly zero
// on an empty count.
SampleBatch sample_gamma_bdrv(const charfn::GammaParams& params,
                              std::size_t n, rng::RngStream& stream);

// log Gamma(alpha, lambda) via the exponential series
// -C - log lambda - E_0/alpha - sum_{k>=1} (E_k/(alpha+k) - 1/k),
// truncated with tail-mean correction.
SampleBatch sample_loggamma_series(const charfn::LogGammaParams& params,
                                   std::size_t n, const SeriesConfig& cfg,
                                   rng::RngStream& stream);

// Innovation of the log-gamma law (lambda = 1): Bernoulli(1-c)-masked
// exponential series with drift (1-c)/k, truncated and tail-mean
// corrected. Throws std::domain_error unless 0 < c < 1.
SampleBatch sample_loggamma_innovation(double alpha, double c, std::size_t n,
                                       const SeriesConfig& cfg,
                                       rng::RngStream& stream);

// Bessel-K(alpha, lambda) as sqrt(2 Gamma(alpha, lambda^2)) * N(0,1).
SampleBatch sample_besselk(const charfn::BesselKParams& params, std::size_t n,
                           rng::RngStream& stream);

// Bessel-K innovation: Poisson(-alpha log c^2) count of
// c^{U(0,1)} * (two-sided Exponential(lambda)) summands.
SampleBatch sample_besselk_innovation(const charfn::BesselKParams& params,
                                      double c, std::size_t n,
                                      rng::RngStream& stream);

// Gamma innovation (one-sided analog): Poisson(-alpha log c) count of
// c^{U(0,1)} * Exponential(lambda) summands; target cf
// ((1 - ict/lambda)/(1 - it/lambda))^alpha.
SampleBatch sample_gamma_innovation(const charfn::GammaParams& params,
                                    double c, std::size_t n,
                                    rng::RngStream& stream);

// Plain Gamma(alpha, lambda) draws (Marsaglia-Tsang); used as the exact
// reference law in distributional checks.
SampleBatch sample_gamma_direct(const charfn::GammaParams& params,
                                std::size_t n, rng::RngStream& stream);

}  // namespace samplers
}  // namespace selfdec

#endif  // SELFDEC_SAMPLERS_HPP
