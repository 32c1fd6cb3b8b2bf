#include "selfdec/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "selfdec/specfun.hpp"

namespace selfdec {
namespace samplers {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

SampleBatch make_batch(std::size_t n, const rng::RngStream& stream,
                       const char* tag) {
  SampleBatch batch;
  batch.values.resize(n);
  batch.seed = stream.seed();
  batch.stream_id = stream.stream_id();
  batch.generator_tag = tag;
  return batch;
}

double kahan_sum(int n_terms, double alpha, double* harmonic_out) {
  // sum of 1/(k(k+alpha)) and, on the side, the harmonic number H_N
  double s = 0.0, sc = 0.0;
  double h = 0.0, hc = 0.0;
  for (int k = 1; k <= n_terms; ++k) {
    const double kd = static_cast<double>(k);
    double y = 1.0 / (kd * (kd + alpha)) - sc;
    double t = s + y;
    sc = (t - s) - y;
    s = t;
    y = 1.0 / kd - hc;
    t = h + y;
    hc = (t - h) - y;
    h = t;
  }
  *harmonic_out = h;
  return s;
}

// Shared state of both series samplers: term weights, the harmonic
// drift and the tail mean. weights[0] = 1/alpha is the k = 0 lead term,
// weights[k] = 1/(alpha+k), so one fused reduction covers the whole
// series.
struct SeriesPlan {
  std::vector<double> weights;
  double harmonic = 0.0;
  double tail_mean = 0.0;  // sum_{k>N} alpha/(k(k+alpha)), via the
                           // digamma closed form for the full series
  explicit SeriesPlan(double alpha, const SeriesConfig& cfg) {
    const int n_terms = cfg.truncation_n;
    weights.resize(static_cast<std::size_t>(n_terms) + 1);
    for (int k = 0; k <= n_terms; ++k) {
      weights[static_cast<std::size_t>(k)] = 1.0 / (alpha + k);
    }
    double partial = kahan_sum(n_terms, alpha, &harmonic);
    if (cfg.tail_mean_correction) {
      const double full =
          specfun::digamma(alpha + 1.0) + specfun::kEulerGamma;  // alpha * sum
      tail_mean = full - alpha * partial;
    }
  }
};

}  // namespace

SampleBatch sample_gamma_bdrv(const charfn::GammaParams& params, std::size_t n,
                              rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_gamma_bdrv: invalid parameters");
  require(n >= 1, "sample_gamma_bdrv: n must be >= 1");
  SampleBatch batch = make_batch(n, stream, "gamma_bdrv");
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t count = stream.poisson(params.alpha);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      sum += stream.exponential(params.lambda);
    }
    batch.values[i] = sum;  // exact zero on an empty count
  }
  return batch;
}

SampleBatch sample_loggamma_series(const charfn::LogGammaParams& params,
                                   std::size_t n, const SeriesConfig& cfg,
                                   rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_loggamma_series: invalid parameters");
  require(n >= 1 && cfg.truncation_n >= 1,
          "sample_loggamma_series: n and truncation must be >= 1");
  SampleBatch batch = make_batch(n, stream, "loggamma");
  const SeriesPlan plan(params.alpha, cfg);
  const double base = -specfun::kEulerGamma - std::log(params.lambda) +
                      plan.harmonic + plan.tail_mean;
  const std::size_t n_terms = plan.weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    batch.values[i] =
        base - stream.series_neg_log_dot(plan.weights.data(), n_terms);
  }
  return batch;
}

SampleBatch sample_loggamma_innovation(double alpha, double c, std::size_t n,
                                       const SeriesConfig& cfg,
                                       rng::RngStream& stream) {
  require(alpha > 0.0, "sample_loggamma_innovation: alpha must be > 0");
  require(c > 0.0 && c < 1.0, "sample_loggamma_innovation: c must be in (0,1)");
  require(n >= 1 && cfg.truncation_n >= 1,
          "sample_loggamma_innovation: n and truncation must be >= 1");
  SampleBatch batch = make_batch(n, stream, "loggamma_innovation");
  const SeriesPlan plan(alpha, cfg);
  const double keep_p = 1.0 - c;
  const double base =
      keep_p * (-specfun::kEulerGamma + plan.harmonic + plan.tail_mean);
  const std::size_t n_terms = plan.weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    batch.values[i] = base - stream.series_neg_log_masked_dot(
                                 plan.weights.data(), n_terms, keep_p);
  }
  return batch;
}

SampleBatch sample_besselk(const charfn::BesselKParams& params, std::size_t n,
                           rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_besselk: invalid parameters");
  require(n >= 1, "sample_besselk: n must be >= 1");
  SampleBatch batch = make_batch(n, stream, "besselk");
  const double rate = params.lambda * params.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = stream.gamma(params.alpha) / rate;
    batch.values[i] = std::sqrt(2.0 * g) * stream.normal();
  }
  return batch;
}

SampleBatch sample_besselk_innovation(const charfn::BesselKParams& params,
                                      double c, std::size_t n,
                                      rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_besselk_innovation: invalid parameters");
  require(c > 0.0 && c < 1.0, "sample_besselk_innovation: c must be in (0,1)");
  require(n >= 1, "sample_besselk_innovation: n must be >= 1");
  SampleBatch batch = make_batch(n, stream, "besselk_innovation");
  const double mean = -params.alpha * std::log(c * c);
  const double log_c = std::log(c);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t count = stream.poisson(mean);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      const double factor = std::exp(stream.uniform01() * log_c);
      sum += factor * stream.laplace(params.lambda);
    }
    batch.values[i] = sum;
  }
  return batch;
}

SampleBatch sample_gamma_innovation(const charfn::GammaParams& params,
                                    double c, std::size_t n,
                                    rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_gamma_innovation: invalid parameters");
  require(c > 0.0 && c < 1.0, "sample_gamma_innovation: c must be in (0,1)");
  require(n >= 1, "sample_gamma_innovation: n must be >= 1");
  SampleBatch batch = make_batch(n, stream, "gamma_innovation");
  const double mean = -params.alpha * std::log(c);
  const double log_c = std::log(c);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t count = stream.poisson(mean);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      const double factor = std::exp(stream.uniform01() * log_c);
      sum += factor * stream.exponential(params.lambda);
    }
    batch.values[i] = sum;
  }
  return batch;
}

SampleBatch sample_gamma_direct(const charfn::GammaParams& params,
                                std::size_t n, rng::RngStream& stream) {
  require(params.alpha > 0.0 && params.lambda > 0.0,
          "sample_gamma_direct: invalid parameters");
  require(n >= 1, "sample_gamma_direct: n must be >= 1");
  SampleBatch batch = make_batch(n, stream, "gamma_direct");
  for (std::size_t i = 0; i < n; ++i) {
    batch.values[i] = stream.gamma(params.alpha) / params.lambda;
  }
  return batch;
}

}  // namespace samplers
}  // namespace selfdec
