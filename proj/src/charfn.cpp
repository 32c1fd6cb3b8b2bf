#include "selfdec/charfn.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace selfdec {
namespace charfn {

namespace {

double sign_of(double t) { return (t > 0.0) - (t < 0.0); }

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

}  // namespace

DistributionModel DistributionModel::make_gamma(GammaParams p) {
  require(p.alpha > 0.0 && p.lambda > 0.0, "Gamma: alpha, lambda must be > 0");
  return DistributionModel(ModelKind::kGamma, p);
}

DistributionModel DistributionModel::make_loggamma(LogGammaParams p) {
  require(p.alpha > 0.0 && p.lambda > 0.0,
          "LogGamma: alpha, lambda must be > 0");
  return DistributionModel(ModelKind::kLogGamma, p);
}

DistributionModel DistributionModel::make_levy(LevyParams p) {
  require(p.c > 0.0, "Levy: c must be > 0");
  return DistributionModel(ModelKind::kLevy, p);
}

DistributionModel DistributionModel::make_symstable1(SymStable1Params p) {
  require(p.scale > 0.0, "SymStable1: scale must be > 0");
  return DistributionModel(ModelKind::kSymStable1, p);
}

DistributionModel DistributionModel::make_besselk(BesselKParams p) {
  require(p.alpha > 0.0 && p.lambda > 0.0,
          "BesselK: alpha, lambda must be > 0");
  return DistributionModel(ModelKind::kBesselK, p);
}

const char* DistributionModel::kind_name() const {
  switch (kind_) {
    case ModelKind::kGamma:
      return "Gamma";
    case ModelKind::kLogGamma:
      return "LogGamma";
    case ModelKind::kLevy:
      return "Levy";
    case ModelKind::kSymStable1:
      return "SymStable1";
    case ModelKind::kBesselK:
      return "BesselK";
  }
  return "?";
}

ComplexValue log_cf(const DistributionModel& model, double t) {
  switch (model.kind()) {
    case ModelKind::kGamma: {
      const auto& p = model.gamma_params();
      const double x = t / p.lambda;
      // -alpha log(1 - i x), branch-safe in log space
      return ComplexValue(-0.5 * p.alpha * std::log1p(x * x),
                          p.alpha * std::atan(x));
    }
    case ModelKind::kLogGamma: {
      const auto& p = model.loggamma_params();
      const ComplexValue lg_shift =
          specfun::log_gamma_complex(ComplexValue(p.alpha, t));
      const double lg_base =
          specfun::log_gamma_complex(ComplexValue(p.alpha, 0.0)).real();
      return ComplexValue(0.0, -t * std::log(p.lambda)) + lg_shift - lg_base;
    }
    case ModelKind::kLevy: {
      const auto& p = model.levy_params();
      const double root = std::sqrt(std::fabs(p.c * t));
      return ComplexValue(-root, p.m * t + root * sign_of(t));
    }
    case ModelKind::kSymStable1: {
      return ComplexValue(-model.symstable1_params().scale * std::fabs(t), 0.0);
    }
    case ModelKind::kBesselK: {
      const auto& p = model.besselk_params();
      const double x = t / p.lambda;
      return ComplexValue(-p.alpha * std::log1p(x * x), 0.0);
    }
  }
  throw std::logic_error("log_cf: unknown model kind");
}

ComplexValue log_bdcf_closed(const DistributionModel& model, double t) {
  switch (model.kind()) {
    case ModelKind::kGamma: {
      const auto& p = model.gamma_params();
      const double x = t / p.lambda;
      const double d = 1.0 + x * x;
      // alpha (1/(1 - ix) - 1) = alpha (-x^2 + ix) / (1 + x^2)
      return ComplexValue(-p.alpha * x * x / d, p.alpha * x / d);
    }
    case ModelKind::kLogGamma: {
      const auto& p = model.loggamma_params();
      const ComplexValue psi =
          specfun::digamma_complex(ComplexValue(p.alpha, t));
      return ComplexValue(0.0, t) * (psi - std::log(p.lambda));
    }
    case ModelKind::kLevy: {
      // differentiating the cf: t (log cf)'(t) = imt - (1/2) sqrt(c|t|)
      // (1 - i sgn t), i.e. the driving law is Levy(m, c/4)
      const auto& p = model.levy_params();
      const double root = std::sqrt(std::fabs(0.25 * p.c * t));
      return ComplexValue(-root, p.m * t + root * sign_of(t));
    }
    case ModelKind::kSymStable1: {
      // stable laws are fixed points: log psi = log cf
      return log_cf(model, t);
    }
    case ModelKind::kBesselK: {
      const auto& p = model.besselk_params();
      const double x = t / p.lambda;
      return ComplexValue(-2.0 * p.alpha * x * x / (1.0 + x * x), 0.0);
    }
  }
  throw std::logic_error("log_bdcf_closed: unknown model kind");
}

ComplexValue log_bdcf_numeric(const DistributionModel& model, double t,
                              double h) {
  if (t == 0.0) {
    throw std::domain_error("log_bdcf_numeric: t must be nonzero");
  }
  if (h <= 0.0) h = 1e-5 * std::max(1.0, std::fabs(t));
  if (h >= 0.5 * std::fabs(t)) {
    throw std::domain_error("log_bdcf_numeric: degenerate step h >= |t|/2");
  }
  const ComplexValue d = log_cf(model, t + h) - log_cf(model, t - h);
  return t * d / (2.0 * h);
}

ComplexValue log_bdcf_loggamma_levy(double t, const LogGammaParams& params,
                                    const QuadratureConfig& quad) {
  if (!(params.alpha > 0.0 && params.lambda > 0.0)) {
    throw std::domain_error("log_bdcf_loggamma_levy: invalid parameters");
  }
  if (t == 0.0) return ComplexValue(0.0, 0.0);
  const double alpha = params.alpha;

  auto integrand = [&](double x) -> ComplexValue {
    // s = 1 - e^{-x} without cancellation; q = x/s -> 1 as x -> 0
    const double em1 = std::expm1(-x);
    const double s = -em1;
    const double ex = 1.0 + em1;  // e^{-x}
    const double bracket = alpha + (1.0 - alpha) * ex;
    const double tx = t * x;
    if (std::fabs(tx) < 1e-4) {
      // (e^z - 1 - z)/x^2 with z = -itx equals -t^2 (1/2 + z/6 + z^2/24 + ...)
      const ComplexValue z(0.0, -tx);
      const ComplexValue series =
          0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0)));
      const double q = x / s;
      return -t * t * series * (q * q) * bracket * std::exp(-alpha * x);
    }
    const ComplexValue w(std::cos(tx) - 1.0, tx - std::sin(tx));
    return w * std::exp(-alpha * x) * bracket / (s * s);
  };

  // extend until the e^{-alpha x} envelope is negligible
  double upper = 40.0 / alpha;
  while (std::exp(-alpha * upper) * (2.0 + std::fabs(t) * upper) >
             0.01 * quad.abs_tol &&
         upper < 1e7) {
    upper *= 1.5;
  }
  const auto integral = quadrature::adaptive_gk(
      integrand, 0.0, upper, 0.5 * quad.abs_tol, quad.rel_tol,
      quad.max_segments);
  const double drift = -std::log(params.lambda) + specfun::digamma(alpha);
  return ComplexValue(0.0, t * drift) + integral.value;
}

ComplexValue cf_from_bdcf(const std::function<ComplexValue(double)>& log_psi,
                          double t, const QuadratureConfig& quad) {
  if (t == 0.0) return ComplexValue(0.0, 0.0);
  // log cf(t) = int_0^t log psi(u) du/u; u = t w^2 tames the sqrt-type
  // kink of the stable family at u = 0.
  auto integrand = [&](double w) -> ComplexValue {
    return 2.0 * log_psi(t * w * w) / w;
  };
  const auto integral = quadrature::adaptive_gk(
      integrand, 0.0, 1.0, quad.abs_tol, quad.rel_tol, quad.max_segments);
  return integral.value;
}

ComplexValue innovation_log_cf(const DistributionModel& model, double c,
                               double t) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::domain_error("innovation_log_cf: c must lie in (0,1)");
  }
  return log_cf(model, t) - log_cf(model, c * t);
}

double loggamma_bddf_variance(const LogGammaParams& params,
                              const QuadratureConfig& quad) {
  if (!(params.alpha > 0.0)) {
    throw std::domain_error("loggamma_bddf_variance: alpha must be > 0");
  }
  const double alpha = params.alpha;
  // x^2 h_alpha(x) = (x/(1-e^{-x}))^2 [alpha + (1-alpha) e^{-x}]
  auto integrand = [alpha](double x) {
    const double em1 = std::expm1(-x);
    const double q = x / -em1;
    const double bracket = alpha + (1.0 - alpha) * (1.0 + em1);
    return q * q * bracket * std::exp(-alpha * x);
  };
  const double upper = 40.0 / std::min(alpha, 1.0);
  return quadrature::adaptive_gk(integrand, 0.0, upper, 1e-10, 1e-10,
                                 quad.max_segments)
      .value;
}

DistributionModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  const auto& p = j.at("params");
  if (kind == "Gamma") {
    return DistributionModel::make_gamma(
        {p.at("alpha").get<double>(), p.at("lambda").get<double>()});
  }
  if (kind == "LogGamma") {
    return DistributionModel::make_loggamma(
        {p.at("alpha").get<double>(), p.at("lambda").get<double>()});
  }
  if (kind == "Levy") {
    return DistributionModel::make_levy(
        {p.at("m").get<double>(), p.at("c").get<double>()});
  }
  if (kind == "SymStable1") {
    SymStable1Params sp;
    if (p.contains("scale")) sp.scale = p.at("scale").get<double>();
    return DistributionModel::make_symstable1(sp);
  }
  if (kind == "BesselK") {
    return DistributionModel::make_besselk(
        {p.at("alpha").get<double>(), p.at("lambda").get<double>()});
  }
  throw std::domain_error("model_from_json: unknown kind \"" + kind + "\"");
}

std::string model_to_json(const DistributionModel& model) {
  nlohmann::json j;
  j["kind"] = model.kind_name();
  switch (model.kind()) {
    case ModelKind::kGamma:
      j["params"] = {{"alpha", model.gamma_params().alpha},
                     {"lambda", model.gamma_params().lambda}};
      break;
    case ModelKind::kLogGamma:
      j["params"] = {{"alpha", model.loggamma_params().alpha},
                     {"lambda", model.loggamma_params().lambda}};
      break;
    case ModelKind::kLevy:
      j["params"] = {{"m", model.levy_params().m},
                     {"c", model.levy_params().c}};
      break;
    case ModelKind::kSymStable1:
      j["params"] = {{"scale", model.symstable1_params().scale}};
      break;
    case ModelKind::kBesselK:
      j["params"] = {{"alpha", model.besselk_params().alpha},
                     {"lambda", model.besselk_params().lambda}};
      break;
  }
  return j.dump();
}

}  // namespace charfn
}  // namespace selfdec
