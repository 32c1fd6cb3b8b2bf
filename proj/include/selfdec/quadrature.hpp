#ifndef SELFDEC_QUADRATURE_HPP
#define SELFDEC_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfdec/specfun.hpp"

namespace selfdec {

// Tolerances and budgets for the inversion engine and the transform
// integrals.
struct QuadratureConfig {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double t_min = 1e-12;
  int max_segments = 10'000;
  int accel_terms = 40;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, ComplexValue partial,
                  double residual)
      : std::runtime_error(what), partial_value(partial), residual(residual) {}
  ComplexValue partial_value;
  double residual;
};

namespace quadrature {

// 15-point Kronrod / 7-point Gauss pair (nonnegative abscissae).
inline constexpr double kXgk15[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kWgk15[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kWg7[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class T>
struct PanelResult {
  T value;
  double err;
};

// One Kronrod panel on [a, b]; err is |K15 - G7|.
template <class F>
auto gk15(F&& f, double a, double b)
    -> PanelResult<decltype(f(0.0))> {
  using T = decltype(f(0.0));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const T fc = f(mid);
  T resk = kWgk15[7] * fc;
  T resg = kWg7[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk15[j];
    const T fsum = f(mid - dx) + f(mid + dx);
    resk += kWgk15[j] * fsum;
    if (j % 2 == 1) resg += kWg7[j / 2] * fsum;
  }
  resk *= half;
  resg *= half;
  return {resk, std::abs(resk - resg)};
}

template <class T>
struct AdaptiveResult {
  T value;
  double est_error;
  int segments;
};

// Globally adaptive bisection driven by per-panel error, largest first.
// The seeded form takes explicit initial panel edges; seeding at roughly
// one oscillation per panel keeps the Gauss/Kronrod difference an honest
// error proxy on oscillatory integrands.
template <class F>
auto adaptive_gk_seeded(F&& f, const std::vector<double>& edges,
                        double abs_tol, double rel_tol, int max_segments)
    -> AdaptiveResult<decltype(f(0.0))> {
  using T = decltype(f(0.0));
  struct Seg {
    double a, b, err;
    T val;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  std::priority_queue<Seg> heap;
  T total{};
  double heap_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = gk15(f, edges[i], edges[i + 1]);
    heap.push({edges[i], edges[i + 1], p.err, p.value});
    total += p.value;
    heap_err += p.err;
  }
  double floor_err = 0.0;  // segments too narrow to refine further
  int segments = static_cast<int>(edges.size()) - 1;
  while (!heap.empty() &&
         heap_err + floor_err >
             std::max(abs_tol, rel_tol * std::abs(total))) {
    if (segments >= max_segments) {
      throw QuadratureError("adaptive_gk: segment budget exhausted",
                            ComplexValue(total), heap_err + floor_err);
    }
    Seg top = heap.top();
    heap.pop();
    if (top.b - top.a < 1e-14 * (std::fabs(top.a) + std::fabs(top.b) + 1.0)) {
      heap_err -= top.err;
      floor_err += top.err;
      continue;
    }
    const double m = 0.5 * (top.a + top.b);
    auto left = gk15(f, top.a, m);
    auto right = gk15(f, m, top.b);
    total += left.value + right.value - top.val;
    heap_err += left.err + right.err - top.err;
    heap.push({top.a, m, left.err, left.value});
    heap.push({m, top.b, right.err, right.value});
    ++segments;
  }
  return {total, heap_err + floor_err, segments};
}

template <class F>
auto adaptive_gk(F&& f, double a, double b, double abs_tol, double rel_tol,
                 int max_segments) -> AdaptiveResult<decltype(f(0.0))> {
  return adaptive_gk_seeded(f, std::vector<double>{a, b}, abs_tol, rel_tol,
                            max_segments);
}

// Euler-transformed summation of a (near-)alternating series, fed one
// term at a time; van Wijngaarden's running variant.
class AlternatingAccumulator {
 public:
  explicit AlternatingAccumulator(int max_order)
      : wksp_(static_cast<std::size_t>(max_order) + 8, 0.0) {}

  void add(double term) {
    ++count_;
    if (nterm_ == 0) {
      wksp_[0] = term;
      sum_ = 0.5 * term;
      nterm_ = 1;
      last_inc_ = std::fabs(sum_);
      return;
    }
    double tmp = wksp_[0];
    wksp_[0] = term;
    for (int j = 0; j + 1 < nterm_; ++j) {
      const double dum = wksp_[j + 1];
      wksp_[j + 1] = 0.5 * (wksp_[j] + tmp);
      tmp = dum;
    }
    const double next = 0.5 * (wksp_[nterm_ - 1] + tmp);
    const bool can_grow = nterm_ + 1 < static_cast<int>(wksp_.size());
    if (std::fabs(next) <= std::fabs(wksp_[nterm_ - 1]) && can_grow) {
      wksp_[nterm_] = next;
      ++nterm_;
      sum_ += 0.5 * next;
      last_inc_ = std::fabs(0.5 * next);
    } else {
      sum_ += next;
      last_inc_ = std::fabs(next);
    }
  }

  double estimate() const { return sum_; }
  double est_error() const { return last_inc_; }
  int terms() const { return count_; }

 private:
  std::vector<double> wksp_;
  double sum_ = 0.0;
  double last_inc_ = 0.0;
  int nterm_ = 0;
  int count_ = 0;
};

}  // namespace quadrature
}  // namespace selfdec

#endif  // SELFDEC_QUADRATURE_HPP
