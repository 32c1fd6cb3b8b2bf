#include "selfdec/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace selfdec {
namespace inversion {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTailProbe = 1e6;

double sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct PieceResult {
  double value = 0.0;
  double err = 0.0;
  int segments = 0;
};

// Depth-limited bisection around gk15; bounded work per oscillation arch.
template <class F>
PieceResult panel_integrate(F&& f, double lo, double hi, double tol,
                            int depth) {
  const auto r = quadrature::gk15(f, lo, hi);
  if (r.err <= tol || depth == 0) return {r.value, r.err, 1};
  const double mid = 0.5 * (lo + hi);
  const PieceResult left = panel_integrate(f, lo, mid, 0.5 * tol, depth - 1);
  const PieceResult right = panel_integrate(f, mid, hi, 0.5 * tol, depth - 1);
  return {left.value + right.value, left.err + right.err,
          left.segments + right.segments};
}

// Tail sum over arches of (roughly) alternating sign, accelerated.
// Converged once the accelerated estimate itself settles (the built-in
// increment heuristic alone is too optimistic when the phase drifts).
template <class F>
PieceResult arch_tail(F&& g, double t0, double spacing,
                      const QuadratureConfig& quad) {
  quadrature::AlternatingAccumulator acc(quad.accel_terms);
  PieceResult out;
  const double tiny = 0.02 * quad.abs_tol;
  const int max_arches = std::max(8 * quad.accel_terms, 320);
  int small_run = 0;
  int settle_run = 0;
  double prev_est = 0.0;
  for (int k = 0; k < max_arches; ++k) {
    const double lo = t0 + k * spacing;
    const PieceResult arch =
        panel_integrate(g, lo, lo + spacing, 0.02 * quad.abs_tol, 8);
    acc.add(arch.value);
    out.err += arch.err;
    out.segments += arch.segments;
    const double est = acc.estimate();
    const double delta = std::fabs(est - prev_est);
    prev_est = est;
    small_run = (std::fabs(arch.value) < tiny) ? small_run + 1 : 0;
    settle_run = (k > 0 && delta < 0.1 * quad.abs_tol) ? settle_run + 1 : 0;
    if (small_run >= 2 || (k >= 10 && settle_run >= 3)) {
      out.value = est;
      out.err += std::max(acc.est_error(), delta);
      return out;
    }
  }
  throw QuadratureError("gil_pelaez: oscillatory tail did not converge",
                        ComplexValue(acc.estimate()),
                        acc.est_error() + out.err);
}

// Tail for near-zero frequency: geometric doubling panels of a smoothly
// decaying integrand, stopping once two consecutive panels are
// negligible (the remainder is then bounded by the last panel).
template <class F>
PieceResult doubling_tail(F&& g, double t0, const QuadratureConfig& quad) {
  PieceResult out;
  const double tiny = 0.05 * quad.abs_tol;
  int small_run = 0;
  double t = t0;
  while (t < 1e12) {
    const PieceResult panel = panel_integrate(g, t, 2.0 * t, tiny, 10);
    out.value += panel.value;
    out.err += panel.err;
    out.segments += panel.segments;
    small_run = (std::fabs(panel.value) < tiny) ? small_run + 1 : 0;
    if (small_run >= 2) {
      out.err += std::fabs(panel.value);
      return out;
    }
    t *= 2.0;
  }
  throw QuadratureError("gil_pelaez: slow tail did not converge",
                        ComplexValue(out.value), out.err);
}

// Initial panel edges for the s = sqrt(t) integral on [0, sqrt(t_hi)]:
// roughly one oscillation of e^{-ita} psi(t) per panel, so the
// Gauss/Kronrod difference stays an honest error proxy.
inline std::vector<double> s_space_edges(double a, double t_hi,
                                         double phase_of_psi,
                                         int max_segments) {
  const double total_phase = std::fabs(a) * t_hi + phase_of_psi;
  const int want = static_cast<int>(total_phase / (2.0 * kPi)) + 1;
  const int count =
      std::clamp(want, 1, std::max(64, max_segments / 2));
  const double s_hi = std::sqrt(t_hi);
  std::vector<double> edges(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) {
    edges[static_cast<std::size_t>(i)] = s_hi * i / count;
  }
  return edges;
}

// remainder_mag(t) = |psi(t) - p0|; log_psi_mag(t) bounds the phase psi
// accumulates up to t. Where psi has no constant part (p0 = 0) the
// integrand decays outright and one adaptive pass under t = s^2 covers
// everything (the substitution also tames the sqrt-type behavior of the
// half-stable family at t -> 0). With p0 > 0 the remainder only decays
// like 1/t, so past the adaptive head the engine sums oscillation arches
// of spacing pi/|a| (asymptotically exact for that family) under Euler
// acceleration, or geometric panels when e^{-ita} barely oscillates.
template <class G, class R, class M>
PieceResult integrate_inversion(G&& g, R&& remainder_mag, M&& log_psi_mag,
                                double a, double mean_hint, double p0,
                                const QuadratureConfig& quad) {
  auto s_space = [&g](double s) { return g(s * s) * (2.0 * s); };
  if (p0 == 0.0) {
    // oscillation-aware endpoint: beyond it even a whole arch of the
    // integrand is negligible
    double t_end = 32.0;
    while (t_end < 1e9 &&
           remainder_mag(t_end) *
                   std::min(1.0, kPi / (std::fabs(a) * t_end + 1e-300)) >
               1e-13) {
      t_end *= 2.0;
    }
    const auto edges =
        s_space_edges(a, t_end, log_psi_mag(t_end), quad.max_segments);
    const auto whole = quadrature::adaptive_gk_seeded(
        s_space, edges, 0.9 * quad.abs_tol, quad.rel_tol, quad.max_segments);
    return {whole.value, whole.est_error, whole.segments};
  }
  double t0 = std::min(
      std::max(20.0, 40.0 / std::max(std::fabs(a - mean_hint), 0.02)), 2000.0);
  while (t0 < 20000.0 && remainder_mag(t0) > 3e-3) t0 *= 1.4;
  const auto edges = s_space_edges(a, t0, log_psi_mag(t0), quad.max_segments);
  const auto head = quadrature::adaptive_gk_seeded(
      s_space, edges, 0.4 * quad.abs_tol, quad.rel_tol, quad.max_segments);
  PieceResult tail;
  const double freq = std::fabs(a);
  if (freq > 1e-3) {
    tail = arch_tail(g, t0, kPi / freq, quad);
  } else {
    tail = doubling_tail(g, t0, quad);
  }
  return {head.value + tail.value, head.est_error + tail.err,
          head.segments + tail.segments};
}

CdfPoint finish_point(double a, double raw, double err, int segments) {
  CdfPoint p;
  p.a = a;
  p.raw_value = raw;
  p.value = std::clamp(raw, 0.0, 1.0);
  p.est_error = err;
  p.segments_used = segments;
  return p;
}

}  // namespace

CdfPoint gil_pelaez_cdf(const LogCfEvaluator& log_psi, double a,
                        const QuadratureConfig& quad) {
  // limit of psi at infinity (nonzero for compound-Poisson laws)
  const ComplexValue lp_far = log_psi(kTailProbe);
  const double p0 =
      (lp_far.real() > -60.0) ? std::exp(lp_far).real() : 0.0;
  const double mean_hint = log_psi(1e-3).imag() / 1e-3;

  auto g = [&](double t) {
    const ComplexValue w = std::exp(log_psi(t) + ComplexValue(0.0, -t * a));
    return (w.imag() + p0 * std::sin(t * a)) / t;
  };
  auto remainder_mag = [&](double t) {
    return std::abs(std::exp(log_psi(t)) - p0);
  };
  auto log_psi_mag = [&](double t) { return std::abs(log_psi(t)); };
  const PieceResult integral = integrate_inversion(
      g, remainder_mag, log_psi_mag, a, mean_hint, p0, quad);
  const double full = -p0 * (kPi / 2.0) * sign_of(a) + integral.value;
  const double raw = 0.5 - full / kPi;
  return finish_point(a, raw, integral.err / kPi, integral.segments);
}

CdfPoint gil_pelaez_cdf_symmetric(const RealLogCfEvaluator& log_psi_real,
                                  double a, const QuadratureConfig& quad) {
  const double lp_far = log_psi_real(kTailProbe);
  const double p0 = (lp_far > -60.0) ? std::exp(lp_far) : 0.0;

  auto g = [&](double t) {
    return (std::exp(log_psi_real(t)) - p0) * std::sin(t * a) / t;
  };
  auto remainder_mag = [&](double t) {
    return std::fabs(std::exp(log_psi_real(t)) - p0);
  };
  auto log_psi_mag = [&](double t) { return std::fabs(log_psi_real(t)); };
  const PieceResult integral = integrate_inversion(
      g, remainder_mag, log_psi_mag, a, 0.0, p0, quad);
  const double full = p0 * (kPi / 2.0) * sign_of(a) + integral.value;
  const double raw = 0.5 + full / kPi;
  return finish_point(a, raw, integral.err / kPi, integral.segments);
}

CdfPoint bddf(const charfn::DistributionModel& model, double a,
              const QuadratureConfig& quad) {
  if (model.is_symmetric()) {
    auto log_psi = [&model](double t) {
      return charfn::log_bdcf_closed(model, t).real();
    };
    return gil_pelaez_cdf_symmetric(log_psi, a, quad);
  }
  auto log_psi = [&model](double t) {
    return model.has_closed_bdcf() ? charfn::log_bdcf_closed(model, t)
                                   : charfn::log_bdcf_numeric(model, t);
  };
  return gil_pelaez_cdf(log_psi, a, quad);
}

double gamma_bddf_closed(double alpha, double lambda, double a,
                         const QuadratureConfig& quad) {
  if (!(alpha > 0.0 && lambda > 0.0)) {
    throw std::domain_error("gamma_bddf_closed: alpha, lambda must be > 0");
  }
  if (!(a >= 0.0)) {
    throw std::domain_error("gamma_bddf_closed: a must be >= 0");
  }
  const double atom = std::exp(-alpha);
  if (a == 0.0) return atom;
  auto integrand = [&](double x) {
    return specfun::bessel_i1_kernel(alpha * lambda * x) *
           std::exp(-lambda * x);
  };
  const auto integral = quadrature::adaptive_gk(
      integrand, 0.0, a, std::min(quad.abs_tol, 1e-11),
      std::min(quad.rel_tol, 1e-12), quad.max_segments);
  return atom * (1.0 + alpha * lambda * integral.value);
}

double stable1_bddf_closed(double a) { return 0.5 + std::atan(a) / kPi; }

double levy_bddf_closed(double m, double c, double a) {
  // CDF of Levy(m, c/4), the background driving law of Levy(m, c):
  // erfc(sqrt((c/4) / (2(a-m))))
  if (!(c > 0.0)) throw std::domain_error("levy_bddf_closed: c must be > 0");
  if (a <= m) return 0.0;
  return specfun::erfc(std::sqrt(c / (8.0 * (a - m))));
}

double sine_integral_erfc_residual(double a, const QuadratureConfig& quad) {
  if (a == 0.0) {
    throw std::domain_error("sine_integral_erfc_residual: a must be nonzero");
  }
  const double aa = a * a;
  auto f = [aa](double x) {
    return std::exp(-x) * std::sin(aa * x * x - x) / x;
  };

  // head through the stationary point of the phase, then arch by arch
  // between consecutive phase zeros
  const double x_turn = 0.5 / aa;
  const double x_head = x_turn + std::max(1.0, x_turn);
  const auto head =
      quadrature::adaptive_gk(f, 1e-300, x_head, 0.2 * quad.abs_tol,
                              quad.rel_tol, quad.max_segments);

  auto zero_at = [aa](double k) {
    return (1.0 + std::sqrt(1.0 + 4.0 * aa * k * kPi)) / (2.0 * aa);
  };
  const double phase_head = aa * x_head * x_head - x_head;
  double k = std::ceil(phase_head / kPi);
  if (zero_at(k) <= x_head) k += 1.0;

  quadrature::AlternatingAccumulator acc(quad.accel_terms);
  double lo = x_head;
  for (int i = 0; i < 100000 && lo < 800.0; ++i) {
    const double hi = zero_at(k);
    const PieceResult arch = panel_integrate(f, lo, hi, 0.02 * quad.abs_tol, 8);
    acc.add(arch.value);
    if (std::fabs(arch.value) < 1e-16 && i > 4) break;
    if (i >= 8 && acc.est_error() < 0.05 * quad.abs_tol &&
        std::fabs(arch.value) < 0.2 * quad.abs_tol) {
      break;
    }
    lo = hi;
    k += 1.0;
  }
  const double lhs = head.value + acc.estimate();
  const double rhs =
      (kPi / 2.0) *
      (specfun::erfc(1.0 / (std::fabs(a) * std::sqrt(2.0))) - 0.5);
  return std::fabs(lhs - rhs);
}

}  // namespace inversion
}  // namespace selfdec
