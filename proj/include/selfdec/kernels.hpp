#ifndef SELFDEC_KERNELS_HPP
#define SELFDEC_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>

// Data-parallel inner-loop kernels behind the samplers: bulk uniform
// generation and fused -log(u) reductions. Every backend (scalar
// reference, AVX2, NEON) implements the same pinned operation sequence,
// so results are bit-identical across backends; the dispatcher picks the
// widest supported one at runtime. Equivalence is enforced by tests.

namespace selfdec {
namespace kernels {

enum class Backend { kScalar, kAvx2, kAvx512, kNeon };

// xoshiro256+ running in four independent lanes; word-major so each
// state word loads as one vector. Lane j produces stream elements
// j, j+4, j+8, ... Uniforms take the top 52 output bits, the + variant's
// intended use for doubles.
struct RngLanes {
  std::uint64_t s[4][4];
};

struct KernelVTable {
  // Writes 4*n_blocks uniforms in (0,1) to dst, interleaved by lane.
  void (*uniform01_blocks)(RngLanes&, double*, std::size_t);
  // out[i] = -log(u[i])
  void (*neg_log)(const double*, double*, std::size_t);
  // sum_i -log(u[i]) * w[i]
  double (*neg_log_dot)(const double*, const double*, std::size_t);
  // sum_i [u_mask[i] < accept_p] * (-log(u_val[i]) * w[i])
  double (*neg_log_masked_dot)(const double*, const double*, const double*,
                               std::size_t, double);
  // Fused generate-and-reduce forms of the two dots, drawing straight
  // from the lane state (the series samplers' hot path). They consume
  // ceil(n/4) blocks (the masked form 2 ceil(n/4): a mask block then a
  // value block per 4 elements); trailing lanes of a final partial block
  // are drawn and discarded.
  double (*rng_neg_log_dot)(RngLanes&, const double*, std::size_t);
  double (*rng_neg_log_masked_dot)(RngLanes&, const double*, std::size_t,
                                   double);
};

// Active backend (auto-detected once; SELFDEC_KERNELS set to scalar,
// avx2, avx512 or neon overrides the choice when that backend is
// supported).
Backend active_backend();
const char* backend_name(Backend b);
bool backend_supported(Backend b);
void force_backend(Backend b);  // throws std::invalid_argument if unsupported

// Dispatched entry points.
void uniform01_blocks(RngLanes& state, double* dst, std::size_t n_blocks);
void neg_log(const double* u, double* out, std::size_t n);
double neg_log_dot(const double* u, const double* w, std::size_t n);
double neg_log_masked_dot(const double* u_mask, const double* u_val,
                          const double* w, std::size_t n, double accept_p);
double rng_neg_log_dot(RngLanes& state, const double* w, std::size_t n);
double rng_neg_log_masked_dot(RngLanes& state, const double* w, std::size_t n,
                              double accept_p);

// Per-backend tables for direct use in equivalence tests; null when the
// backend is not compiled in or not runnable on this machine.
const KernelVTable* vtable_for(Backend b);

// ---------------------------------------------------------------------
// Canonical element operation. Both the scalar reference loops and the
// vector lanes compute exactly this sequence, so any backend's output
// can be checked element-for-element against neg_log1.
//
// Requires u to be a positive normal double < 1 (all generated uniforms
// qualify). Relative accuracy ~3e-14 (the atanh series truncated at
// s^7 on s <= 0.0295): reduction u = m 2^e with m in
// [sqrt(1/2), sqrt(2)), then log m = 2r (1 + s*P(s)) for r = (m-1)/(m+1),
// s = r^2, with coefficients 1/3, 1/5, ..., 1/17.
// ---------------------------------------------------------------------

namespace detail {
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrtHalf = 0.70710678118654752440;
inline constexpr double kLogPoly[8] = {
    1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,
    1.0 / 11.0, 1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0,
};

inline std::uint64_t bits_of(double x) {
  std::uint64_t b;
  __builtin_memcpy(&b, &x, 8);
  return b;
}
inline double double_of(std::uint64_t b) {
  double x;
  __builtin_memcpy(&x, &b, 8);
  return x;
}
}  // namespace detail

inline double neg_log1(double u) {
  using namespace detail;
  const std::uint64_t bits = bits_of(u);
  std::int64_t e = static_cast<std::int64_t>(bits >> 52) - 1022;
  double m = double_of((bits & 0x000FFFFFFFFFFFFFULL) | 0x3FE0000000000000ULL);
  if (m < kSqrtHalf) {
    m = m + m;
    e -= 1;
  }
  const double r = (m - 1.0) / (m + 1.0);
  const double s = r * r;
  double p = kLogPoly[7];
  for (int i = 6; i >= 0; --i) p = std::fma(p, s, kLogPoly[i]);
  const double two_r = r + r;
  const double log_m = std::fma(two_r * s, p, two_r);
  const double ed = static_cast<double>(e);
  const double res = ed * kLn2Hi + std::fma(ed, kLn2Lo, log_m);
  return -res;
}

// Uniform from 52 random bits: u = (k + 0.5) * 2^-52, exactly
// representable, never 0 or 1.
inline double uniform_from_bits(std::uint64_t r) {
  const double k = static_cast<double>(r >> 12);
  return (k + 0.5) * 0x1p-52;
}

}  // namespace kernels
}  // namespace selfdec

#endif  // SELFDEC_KERNELS_HPP
