#ifndef SELFDEC_CHARFN_HPP
#define SELFDEC_CHARFN_HPP

#include <functional>
#include <string>
#include <variant>

#include "selfdec/quadrature.hpp"
#include "selfdec/specfun.hpp"

namespace selfdec {
namespace charfn {

// Catalog of laws with exact log-characteristic functions. Everything is
// kept in log space so no unwinding of the complex logarithm is ever
// needed.

struct GammaParams {
  double alpha;   // shape
  double lambda;  // rate
};

struct LogGammaParams {
  double alpha;
  double lambda;
};

struct LevyParams {
  double m;  // location
  double c;  // scale
};

struct SymStable1Params {
  double scale = 1.0;  // log cf is -scale * |t|
};

struct BesselKParams {
  double alpha;
  double lambda;
};

enum class ModelKind { kGamma, kLogGamma, kLevy, kSymStable1, kBesselK };

class DistributionModel {
 public:
  // Factories validate parameter invariants and throw std::domain_error.
  static DistributionModel make_gamma(GammaParams p);
  static DistributionModel make_loggamma(LogGammaParams p);
  static DistributionModel make_levy(LevyParams p);
  static DistributionModel make_symstable1(SymStable1Params p);
  static DistributionModel make_besselk(BesselKParams p);

  ModelKind kind() const { return kind_; }
  const char* kind_name() const;
  bool has_closed_bdcf() const { return true; }  // whole catalog qualifies
  bool is_symmetric() const {
    return kind_ == ModelKind::kSymStable1 || kind_ == ModelKind::kBesselK;
  }

  const GammaParams& gamma_params() const {
    return std::get<GammaParams>(params_);
  }
  const LogGammaParams& loggamma_params() const {
    return std::get<LogGammaParams>(params_);
  }
  const LevyParams& levy_params() const { return std::get<LevyParams>(params_); }
  const SymStable1Params& symstable1_params() const {
    return std::get<SymStable1Params>(params_);
  }
  const BesselKParams& besselk_params() const {
    return std::get<BesselKParams>(params_);
  }

 private:
  using Params = std::variant<GammaParams, LogGammaParams, LevyParams,
                              SymStable1Params, BesselKParams>;
  DistributionModel(ModelKind kind, Params params)
      : kind_(kind), params_(params) {}
  ModelKind kind_;
  Params params_;
};

// Principal-branch log of the characteristic function; Hermitian in t.
ComplexValue log_cf(const DistributionModel& model, double t);

// Closed-form log of the background driving characteristic function.
ComplexValue log_bdcf_closed(const DistributionModel& model, double t);

// t (log cf)'(t) by central differences of log_cf with step h; h <= 0
// picks the default 1e-5 * max(1, |t|). Throws std::domain_error for
// t == 0 or a degenerate step h >= |t|/2.
ComplexValue log_bdcf_numeric(const DistributionModel& model, double t,
                              double h = 0.0);

// Log BDCF of the log-gamma law from its Levy-measure integral
// representation: it(-log lambda + digamma(alpha))
// + int_0^inf (e^{-itx} - 1 + itx) e^{-alpha x} h_alpha(x) dx with
// h_alpha(x) = [alpha + (1-alpha) e^{-x}] (1 - e^{-x})^{-2}.
ComplexValue log_bdcf_loggamma_levy(double t, const LogGammaParams& params,
                                    const QuadratureConfig& quad);

// Reconstructs log cf from a log-BDCF evaluator:
// log cf(t) = int_0^t log psi(u) du / u.
ComplexValue cf_from_bdcf(const std::function<ComplexValue(double)>& log_psi,
                          double t, const QuadratureConfig& quad);

// log cf of the innovation X_c in X =(d) c X + X_c:
// log cf(t) - log cf(c t). Throws std::domain_error unless 0 < c < 1.
ComplexValue innovation_log_cf(const DistributionModel& model, double c,
                               double t);

// Variance of the log-gamma background driving law:
// int_0^inf x^2 e^{-alpha x} h_alpha(x) dx by quadrature.
double loggamma_bddf_variance(const LogGammaParams& params,
                              const QuadratureConfig& quad);

// JSON descriptor {"kind": ..., "params": {...}} used by the CLI.
DistributionModel model_from_json(const std::string& text);
std::string model_to_json(const DistributionModel& model);

}  // namespace charfn
}  // namespace selfdec

#endif  // SELFDEC_CHARFN_HPP
