#ifndef SELFDEC_TESTS_ORACLES_HPP
#define SELFDEC_TESTS_ORACLES_HPP

// Brute-force reference implementations used only by the tests. They
// deliberately avoid the library's own algorithms: plain series with
// Euler-Maclaurin tails, composite Simpson quadrature, and the
// Poisson-mixture form of the gamma driving law.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

inline constexpr double kEuler = 0.57721566490153286060651209008240243;

// Composite Simpson on [a, b]; n_intervals must be even.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n_intervals) {
  const double h = (b - a) / n_intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < n_intervals; ++i) {
    sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// digamma from the partial-fraction series
// psi(x) = -C - 1/x + x sum_k 1/(k(k+x)), with a midpoint-rule tail.
inline double digamma_series(double x) {
  const int cut = 20'000;
  double partial = 0.0;
  for (int k = cut; k >= 1; --k) {
    partial += 1.0 / (static_cast<double>(k) * (k + x));
  }
  const double e = cut + 0.5;
  const double tail = std::log1p(x / e) / x +
                      (2.0 * e + x) / (24.0 * e * e * (e + x) * (e + x));
  return -kEuler - 1.0 / x + x * (partial + tail);
}

// trigamma from sum_k 1/(x+k)^2 with a midpoint-rule tail.
inline double trigamma_series(double x) {
  const int cut = 20'000;
  double partial = 0.0;
  for (int k = cut; k >= 0; --k) {
    const double d = x + k;
    partial += 1.0 / (d * d);
  }
  const double e = x + cut + 1.0 - 0.5;
  return partial + 1.0 / e - 1.0 / (12.0 * e * e * e);
}

// erfc from the defining integral: series-free, Simpson only.
inline double erfc_integral(double x) {
  constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215452;
  if (x < 0.0) return 2.0 - erfc_integral(-x);
  auto f = [](double s) { return std::exp(-s * s); };
  if (x <= 1.5) {
    return 1.0 - kTwoOverSqrtPi * simpson(f, 0.0, x, 4000);
  }
  const double upper = std::sqrt(x * x + 90.0);
  return kTwoOverSqrtPi * simpson(f, x, upper, 40'000);
}

// I_1(2 sqrt(b))/sqrt(b) by direct long-double summation of
// sum_{k>=1} b^{k-1}/(k!(k-1)!).
inline double bessel_kernel_series(double b, int min_terms = 25) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k <= 3000; ++k) {
    term *= static_cast<long double>(b) /
            (static_cast<long double>(k) * (k + 1.0L));
    sum += term;
    if (k >= min_terms && term < 1e-25L * sum) break;
  }
  return static_cast<double>(sum);
}

// Erlang(k, rate) CDF at a: 1 - e^{-rate a} sum_{j<k} (rate a)^j / j!.
inline double erlang_cdf(int k, double rate, double a) {
  if (a <= 0.0) return 0.0;
  const double x = rate * a;
  double term = 1.0, sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= x / (j + 1.0);
  }
  return 1.0 - std::exp(-x) * sum;
}

// P(sum_{i<=N_alpha} E_i(lambda) <= a) as the Poisson mixture
// sum_k e^{-alpha} alpha^k / k! Erlang_k(lambda, a), truncated at k_max.
inline double gamma_bddf_poisson_mixture(double alpha, double lambda, double a,
                                         int k_max = 60) {
  double weight = std::exp(-alpha);
  double sum = weight;  // k = 0 atom (a >= 0)
  for (int k = 1; k <= k_max; ++k) {
    weight *= alpha / k;
    sum += weight * erlang_cdf(k, lambda, a);
  }
  return sum;
}

struct MeanVar {
  double mean;
  double var;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  const double mean = s / static_cast<double>(xs.size());
  double q = 0.0;
  for (double x : xs) q += (x - mean) * (x - mean);
  return {mean, q / static_cast<double>(xs.size() - 1)};
}

}  // namespace oracles

#endif  // SELFDEC_TESTS_ORACLES_HPP
