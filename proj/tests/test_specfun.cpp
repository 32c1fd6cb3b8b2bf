#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "selfdec/specfun.hpp"

using namespace selfdec;
using specfun::kEulerGamma;

namespace {
double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}
}  // namespace

TEST_CASE("oracles reproduce exactly known constants") {
  // the series/quadrature oracles themselves, pinned on textbook values
  CHECK(rel_err(oracles::digamma_series(1.0), -kEulerGamma) < 1e-13);
  CHECK(rel_err(oracles::trigamma_series(1.0), M_PI * M_PI / 6.0) < 1e-13);
  CHECK(rel_err(oracles::trigamma_series(0.5), M_PI * M_PI / 2.0) < 1e-13);
  CHECK(rel_err(oracles::erfc_integral(0.0), 1.0) < 1e-14);
}

TEST_CASE("log_gamma_complex on the real axis") {
  CHECK(std::abs(specfun::log_gamma_complex({1.0, 0.0})) < 1e-14);
  CHECK(std::abs(specfun::log_gamma_complex({2.0, 0.0})) < 1e-14);
  // Gamma(1/2) = sqrt(pi), oracle by quadrature of the defining integral
  // after x = u^2
  const double gamma_half =
      2.0 * oracles::simpson([](double u) { return std::exp(-u * u); }, 0.0,
                             40.0, 400'000);
  CHECK(rel_err(specfun::log_gamma_complex({0.5, 0.0}).real(),
                std::log(gamma_half)) < 1e-12);
  // recurrence Gamma(z+1) = z Gamma(z) off the shift path
  const double lg = specfun::log_gamma_complex({3.7, 0.0}).real();
  const double lg1 = specfun::log_gamma_complex({4.7, 0.0}).real();
  CHECK(rel_err(lg1, lg + std::log(3.7)) < 1e-13);
  CHECK_THROWS_AS((void)specfun::log_gamma_complex({0.0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS((void)specfun::log_gamma_complex({-1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("log_gamma_complex is continuous and conjugate-symmetric in t") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    ComplexValue prev = specfun::log_gamma_complex({alpha, 0.0});
    for (int i = 1; i <= 400; ++i) {
      const double t = 0.05 * i;
      const ComplexValue cur = specfun::log_gamma_complex({alpha, t});
      CHECK(std::abs(cur - prev) < 0.25);  // no branch jumps ~ 2 pi
      const ComplexValue conj_val = specfun::log_gamma_complex({alpha, -t});
      CHECK(std::abs(conj_val - std::conj(cur)) < 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("digamma against the series oracle") {
  CHECK(rel_err(specfun::digamma(1.0), -kEulerGamma) < 1e-13);
  const double want_half = -kEulerGamma - 2.0 * std::log(2.0);
  CHECK(rel_err(specfun::digamma(0.5), want_half) < 1e-13);
  // recurrence psi(x+1) = psi(x) + 1/x
  CHECK(rel_err(specfun::digamma(2.0), specfun::digamma(1.0) + 1.0) < 1e-13);
  for (double x : {0.1, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 3.3, 5.0, 7.7, 10.0,
                   14.2, 25.0, 50.0, 123.0}) {
    CHECK(rel_err(specfun::digamma(x), oracles::digamma_series(x)) < 1e-12);
  }
  CHECK_THROWS_AS((void)specfun::digamma(0.0), std::domain_error);
  CHECK_THROWS_AS((void)specfun::digamma(-3.0), std::domain_error);
}

TEST_CASE("digamma_complex: real axis, conjugation, derivative of lgamma") {
  CHECK(std::abs(specfun::digamma_complex({1.0, 0.0}) -
                 ComplexValue(-kEulerGamma, 0.0)) < 1e-13);
  for (double alpha : {0.7, 1.0, 3.0}) {
    CHECK(std::abs(specfun::digamma_complex({alpha, 0.0}).imag()) < 1e-14);
    CHECK(rel_err(specfun::digamma_complex({alpha, 0.0}).real(),
                  specfun::digamma(alpha)) < 1e-12);
  }
  // finite differences of log_gamma_complex as the oracle
  const double h = 1e-5;
  for (ComplexValue z : {ComplexValue(1.0, 1.0), ComplexValue(2.5, -0.7),
                         ComplexValue(0.5, 3.0)}) {
    const ComplexValue fd = (specfun::log_gamma_complex(z + ComplexValue(h)) -
                             specfun::log_gamma_complex(z - ComplexValue(h))) /
                            (2.0 * h);
    CHECK(std::abs(specfun::digamma_complex(z) - fd) < 1e-6);
    // conjugation symmetry
    const ComplexValue conj_val = specfun::digamma_complex(std::conj(z));
    CHECK(std::abs(conj_val - std::conj(specfun::digamma_complex(z))) < 1e-12);
  }
  CHECK_THROWS_AS((void)specfun::digamma_complex({-0.5, 1.0}),
                  std::domain_error);
}

TEST_CASE("trigamma against the series oracle") {
  CHECK(rel_err(specfun::trigamma(1.0), M_PI * M_PI / 6.0) < 1e-13);
  CHECK(rel_err(specfun::trigamma(0.5), M_PI * M_PI / 2.0) < 1e-13);
  CHECK(rel_err(specfun::trigamma(2.0), M_PI * M_PI / 6.0 - 1.0) < 1e-13);
  for (double x : {0.1, 0.3, 0.5, 1.0, 2.2, 4.0, 8.0, 16.0, 64.0}) {
    CHECK(rel_err(specfun::trigamma(x), oracles::trigamma_series(x)) < 1e-12);
  }
  CHECK_THROWS_AS((void)specfun::trigamma(0.0), std::domain_error);
}

TEST_CASE("digamma derivative matches trigamma by central differences") {
  const double h = 1e-5;
  for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double fd =
        (specfun::digamma(x + h) - specfun::digamma(x - h)) / (2.0 * h);
    CHECK(std::fabs(fd - specfun::trigamma(x)) < 1e-6);
  }
}

TEST_CASE("erfc against the integral oracle") {
  CHECK(specfun::erfc(0.0) == 1.0);
  CHECK(specfun::erfc(40.0) == 0.0);
  CHECK(rel_err(specfun::erfc(1.0), 0.15729920705028513) < 1e-13);
  for (double x : {0.05, 0.3, 0.7, 1.0, 1.4, 1.9, 2.0, 2.1, 2.6, 3.0, 4.0,
                   5.5}) {
    CHECK(rel_err(specfun::erfc(x), oracles::erfc_integral(x)) < 1e-12);
    // erfc(-x) = 2 - erfc(x)
    CHECK(std::fabs(specfun::erfc(-x) - (2.0 - specfun::erfc(x))) < 1e-15);
  }
  // monotone decreasing
  double prev = specfun::erfc(-6.0);
  for (double x = -5.75; x <= 6.0; x += 0.25) {
    const double cur = specfun::erfc(x);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("bessel_i1_kernel: series values, asymptotic branch, growth") {
  CHECK(specfun::bessel_i1_kernel(0.0) == 1.0);
  // I_1(2) and the b = 4 point, both from the direct partial summation
  CHECK(rel_err(specfun::bessel_i1_kernel(1.0),
                oracles::bessel_kernel_series(1.0)) < 1e-13);
  CHECK(rel_err(specfun::bessel_i1_kernel(4.0),
                oracles::bessel_kernel_series(4.0)) < 1e-13);
  CHECK(specfun::bessel_i1_kernel(1.0) ==
        doctest::Approx(1.5906368546373291).epsilon(1e-12));
  // across the asymptotic switch at 2 sqrt(b) = 30
  for (double b : {100.0, 224.0, 225.0, 226.0, 400.0, 2500.0, 40'000.0}) {
    CHECK(rel_err(specfun::bessel_i1_kernel(b),
                  oracles::bessel_kernel_series(b)) < 1e-12);
  }
  // strictly increasing
  double prev = specfun::bessel_i1_kernel(0.0);
  for (double b = 0.5; b <= 300.0; b += 0.5) {
    const double cur = specfun::bessel_i1_kernel(b);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS((void)specfun::bessel_i1_kernel(-1.0), std::domain_error);
  CHECK_THROWS_AS((void)specfun::bessel_i1_kernel(2e5), std::overflow_error);
}
