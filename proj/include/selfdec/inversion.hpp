#ifndef SELFDEC_INVERSION_HPP
#define SELFDEC_INVERSION_HPP

#include <functional>

#include "selfdec/charfn.hpp"
#include "selfdec/quadrature.hpp"

namespace selfdec {
namespace inversion {

struct CdfPoint {
  double a = 0.0;
  double value = 0.0;      // clamped to [0, 1]
  double raw_value = 0.0;  // pre-clamp value, kept for diagnostics
  double est_error = 0.0;
  int segments_used = 0;
};

using LogCfEvaluator = std::function<ComplexValue(double)>;
using RealLogCfEvaluator = std::function<double(double)>;

// CDF from a log-characteristic-function evaluator via
// G(a) = 1/2 - (1/pi) int_0^inf Im(e^{-ita} psi(t)) dt/t.
// Valid at continuity points of G; at an atom the formula returns the
// midpoint (G(a-) + G(a))/2, which is standard for this inversion.
// Compound-Poisson-type psi with |psi| -> p0 > 0 is handled by splitting
// off the constant p0, whose integral is known in closed form; the
// remainder decays and is finished by oscillation-zero segments with
// Euler acceleration (or geometric panels when e^{-ita} barely
// oscillates). Throws QuadratureError when budgets are exhausted.
CdfPoint gil_pelaez_cdf(const LogCfEvaluator& log_psi, double a,
                        const QuadratureConfig& quad);

// Same, for a symmetric law whose log cf is real:
// G(a) = 1/2 + (1/pi) int_0^inf psi(t) sin(ta) dt/t.
CdfPoint gil_pelaez_cdf_symmetric(const RealLogCfEvaluator& log_psi_real,
                                  double a, const QuadratureConfig& quad);

// Background driving distribution function of a catalog model:
// gil_pelaez_cdf applied to its closed-form log BDCF (the symmetric
// variant when the model is symmetric).
CdfPoint bddf(const charfn::DistributionModel& model, double a,
              const QuadratureConfig& quad);

// P(sum_{k<=N_alpha} E_k(lambda) <= a): atom e^{-alpha} at zero plus the
// Bessel-kernel integral e^{-alpha} alpha lambda
// int_0^a I_1(2 sqrt(alpha lambda x))/sqrt(alpha lambda x) e^{-lambda x} dx.
double gamma_bddf_closed(double alpha, double lambda, double a,
                         const QuadratureConfig& quad = {});

// BDDF of the symmetric 1-stable law: 1/2 + arctan(a)/pi.
double stable1_bddf_closed(double a);

// BDDF of Levy(m, c): 0 for a <= m, erfc(sqrt(c / (4(a-m)))) above.
double levy_bddf_closed(double m, double c, double a);

// | int_0^inf e^{-x} sin((ax)^2 - x) dx/x
//   - (pi/2)(erfc(1/(|a| sqrt(2))) - 1/2) |,
// the left side by the oscillatory engine, the right side by erfc.
// A small residual certifies both. Requires a != 0.
double sine_integral_erfc_residual(double a, const QuadratureConfig& quad);

}  // namespace inversion
}  // namespace selfdec

#endif  // SELFDEC_INVERSION_HPP
