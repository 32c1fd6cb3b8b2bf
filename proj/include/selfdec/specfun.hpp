#ifndef SELFDEC_SPECFUN_HPP
#define SELFDEC_SPECFUN_HPP

#include <complex>

namespace selfdec {

// Carrier for complex characteristic-function values and Gamma/digamma
// evaluations on vertical lines re + i*t, re > 0.
using ComplexValue = std::complex<double>;

namespace specfun {

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Principal branch of log Gamma(z) for re(z) > 0, continuous along
// vertical lines z = a + i*t and real on the positive real axis.
// Recurrence shift into re(z) >= 8 followed by the Stirling expansion.
// Throws std::domain_error for re(z) <= 0.
ComplexValue log_gamma_complex(ComplexValue z);

// Digamma (first log-derivative of Gamma) for x > 0, relative accuracy
// better than 1e-12. Throws std::domain_error for x <= 0.
double digamma(double x);

// Digamma on the right half plane; agrees with digamma(x) on the real
// axis. Throws std::domain_error for re(z) <= 0.
ComplexValue digamma_complex(ComplexValue z);

// Trigamma (second log-derivative of Gamma) for x > 0.
// Throws std::domain_error for x <= 0.
double trigamma(double x);

// Complementary error function, all real x.
double erfc(double x);

// Sum_{k>=1} b^{k-1} / (k! (k-1)!) = I_1(2 sqrt(b)) / sqrt(b) for b >= 0.
// Power series below the switch point, large-argument asymptotic of I_1
// above it. Throws std::domain_error for b < 0 and std::overflow_error
// once the result exceeds the double range.
double bessel_i1_kernel(double b);

}  // namespace specfun
}  // namespace selfdec

#endif  // SELFDEC_SPECFUN_HPP
