#ifndef SELFDEC_VALIDATION_HPP
#define SELFDEC_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "selfdec/charfn.hpp"
#include "selfdec/quadrature.hpp"
#include "selfdec/rng.hpp"

namespace selfdec {
namespace validation {

// One executed identity check. passed <=> residual <= tolerance.
// Monte Carlo checks report a residual normalized by their statistical
// band, with tolerance 1.
struct IdentityReport {
  std::string identity_id;
  std::string params;
  ComplexValue lhs = 0.0;
  ComplexValue rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// JSON line {"identity_id","residual","tolerance","passed","params"}.
std::string report_to_json(const IdentityReport& report);

// Transform round trip: reconstruct log cf from the closed-form BDCF and
// take the worst deviation over the grid. Tolerance 1e-7.
IdentityReport check_bdcf_roundtrip(const charfn::DistributionModel& model,
                                    const std::vector<double>& t_grid,
                                    const QuadratureConfig& quad);

// Series-sampler mean/variance against digamma/trigamma. Residual is
// normalized: max of |mean error| / (4 SE) and |variance error| / (5%).
IdentityReport check_loggamma_moments(const charfn::LogGammaParams& params,
                                      std::size_t n, rng::RngStream& stream);

// trigamma(alpha) against the integral int_0^inf x e^{-alpha x}/(1-e^{-x}) dx.
IdentityReport check_trigamma_integral(double alpha,
                                            const QuadratureConfig& quad);

// Mean and variance of the log-gamma BDDF two ways: finite differences
// of the closed-form log BDCF at 0 (Richardson-extrapolated, h = 1e-4)
// versus the drift and the variance integral. Tolerance 1e-5.
IdentityReport check_bddf_moments_loggamma(const charfn::LogGammaParams& params,
                                           const QuadratureConfig& quad);

// Gamma-ratio product form: the partial product with its digamma tail
// correction against exp(log Gamma(alpha+it) - log Gamma(alpha)).
IdentityReport check_gamma_ratio_product(double alpha, double t, int n_terms);

// Two-sample KS between {c x_i + z_i} and fresh draws of the law itself;
// models with an innovation sampler only (Gamma, LogGamma, BesselK).
IdentityReport check_selfdecomposition(const charfn::DistributionModel& model,
                                       double c, std::size_t n,
                                       rng::RngStream& stream);

struct SuiteConfig {
  std::uint64_t seed = 20250101;
  std::size_t mc_n = 100'000;    // Monte Carlo sample size
  int series_truncation = 10'000;
  double tolerance_scale = 1.0;  // multiplies every tolerance
  std::vector<std::string> only;  // substring filters on identity ids
  QuadratureConfig quad;
};

// Runs the whole default matrix (the named checks above plus the
// engine-vs-closed-form, sampler-cf, kernel-series and partial-fraction
// identities), each on its own derived stream so filtering never
// changes another check's draws. Failures are collected, not thrown.
// Reports come back sorted by (identity_id, params).
std::vector<IdentityReport> run_all(const SuiteConfig& config);

// Distinct identity ids run_all can emit, sorted; one registered check
// family per id.
std::vector<std::string> registered_identity_ids();

// Shared statistics helpers (also used by the test suites).
double ks_two_sample(std::vector<double> a, std::vector<double> b);
ComplexValue empirical_cf(const std::vector<double>& values, double t);

}  // namespace validation
}  // namespace selfdec

#endif  // SELFDEC_VALIDATION_HPP
