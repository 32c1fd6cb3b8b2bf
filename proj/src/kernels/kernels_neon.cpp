// NEON backend (aarch64). Two 2-lane registers cover the same four-lane
// layout as the other backends; operation order matches them exactly.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "selfdec/kernels.hpp"

namespace selfdec {
namespace kernels {
namespace {

template <int K>
inline uint64x2_t rotl64(uint64x2_t x) {
  return vorrq_u64(vshlq_n_u64(x, K), vshrq_n_u64(x, 64 - K));
}

struct Pair {
  uint64x2_t lo, hi;  // lanes {0,1} and {2,3}
};

inline Pair rng_step(RngLanes& st) {
  uint64x2_t s0l = vld1q_u64(&st.s[0][0]), s0h = vld1q_u64(&st.s[0][2]);
  uint64x2_t s1l = vld1q_u64(&st.s[1][0]), s1h = vld1q_u64(&st.s[1][2]);
  uint64x2_t s2l = vld1q_u64(&st.s[2][0]), s2h = vld1q_u64(&st.s[2][2]);
  uint64x2_t s3l = vld1q_u64(&st.s[3][0]), s3h = vld1q_u64(&st.s[3][2]);
  Pair out;
  out.lo = vaddq_u64(s0l, s3l);
  out.hi = vaddq_u64(s0h, s3h);
  const uint64x2_t tl = vshlq_n_u64(s1l, 17), th = vshlq_n_u64(s1h, 17);
  s2l = veorq_u64(s2l, s0l);
  s2h = veorq_u64(s2h, s0h);
  s3l = veorq_u64(s3l, s1l);
  s3h = veorq_u64(s3h, s1h);
  s1l = veorq_u64(s1l, s2l);
  s1h = veorq_u64(s1h, s2h);
  s0l = veorq_u64(s0l, s3l);
  s0h = veorq_u64(s0h, s3h);
  s2l = veorq_u64(s2l, tl);
  s2h = veorq_u64(s2h, th);
  s3l = rotl64<45>(s3l);
  s3h = rotl64<45>(s3h);
  vst1q_u64(&st.s[0][0], s0l);
  vst1q_u64(&st.s[0][2], s0h);
  vst1q_u64(&st.s[1][0], s1l);
  vst1q_u64(&st.s[1][2], s1h);
  vst1q_u64(&st.s[2][0], s2l);
  vst1q_u64(&st.s[2][2], s2h);
  vst1q_u64(&st.s[3][0], s3l);
  vst1q_u64(&st.s[3][2], s3h);
  return out;
}

inline float64x2_t uniform_from_bits2(uint64x2_t raw) {
  const float64x2_t dk = vcvtq_f64_u64(vshrq_n_u64(raw, 12));
  return vmulq_f64(vaddq_f64(dk, vdupq_n_f64(0.5)), vdupq_n_f64(0x1p-52));
}

inline float64x2_t neg_log2(float64x2_t u) {
  using namespace detail;
  const uint64x2_t bits = vreinterpretq_u64_f64(u);
  int64x2_t e = vsubq_s64(vreinterpretq_s64_u64(vshrq_n_u64(bits, 52)),
                          vdupq_n_s64(1022));
  float64x2_t m = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000FFFFFFFFFFFFFULL)),
                vdupq_n_u64(0x3FE0000000000000ULL)));
  const uint64x2_t lt = vcltq_f64(m, vdupq_n_f64(kSqrtHalf));
  m = vbslq_f64(lt, vaddq_f64(m, m), m);
  e = vaddq_s64(e, vreinterpretq_s64_u64(lt));  // subtract 1 where true
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t r = vdivq_f64(vsubq_f64(m, one), vaddq_f64(m, one));
  const float64x2_t s = vmulq_f64(r, r);
  float64x2_t p = vdupq_n_f64(kLogPoly[7]);
  for (int i = 6; i >= 0; --i) {
    p = vfmaq_f64(vdupq_n_f64(kLogPoly[i]), p, s);
  }
  const float64x2_t two_r = vaddq_f64(r, r);
  const float64x2_t log_m = vfmaq_f64(two_r, vmulq_f64(two_r, s), p);
  const float64x2_t ed = vcvtq_f64_s64(e);
  const float64x2_t res =
      vaddq_f64(vmulq_f64(ed, vdupq_n_f64(kLn2Hi)),
                vfmaq_f64(log_m, ed, vdupq_n_f64(kLn2Lo)));
  return vnegq_f64(res);
}

inline double hsum_pinned(float64x2_t lo, float64x2_t hi) {
  return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
         (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

void uniform01_blocks_impl(RngLanes& st, double* dst, std::size_t n_blocks) {
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const Pair raw = rng_step(st);
    vst1q_f64(dst + 4 * b, uniform_from_bits2(raw.lo));
    vst1q_f64(dst + 4 * b + 2, uniform_from_bits2(raw.hi));
  }
}

void neg_log_impl(const double* u, double* out, std::size_t n) {
  const std::size_t n2 = n - (n % 2);
  for (std::size_t i = 0; i < n2; i += 2) {
    vst1q_f64(out + i, neg_log2(vld1q_f64(u + i)));
  }
  for (std::size_t i = n2; i < n; ++i) out[i] = neg_log1(u[i]);
}

double neg_log_dot_impl(const double* u, const double* w, std::size_t n) {
  float64x2_t acc_lo = vdupq_n_f64(0.0), acc_hi = vdupq_n_f64(0.0);
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    acc_lo = vfmaq_f64(acc_lo, neg_log2(vld1q_f64(u + i)), vld1q_f64(w + i));
    acc_hi =
        vfmaq_f64(acc_hi, neg_log2(vld1q_f64(u + i + 2)), vld1q_f64(w + i + 2));
  }
  double sum = hsum_pinned(acc_lo, acc_hi);
  for (std::size_t i = n4; i < n; ++i) {
    sum = std::fma(neg_log1(u[i]), w[i], sum);
  }
  return sum;
}

double neg_log_masked_dot_impl(const double* u_mask, const double* u_val,
                               const double* w, std::size_t n,
                               double accept_p) {
  const float64x2_t p = vdupq_n_f64(accept_p);
  float64x2_t acc_lo = vdupq_n_f64(0.0), acc_hi = vdupq_n_f64(0.0);
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    const float64x2_t t_lo =
        vmulq_f64(neg_log2(vld1q_f64(u_val + i)), vld1q_f64(w + i));
    const float64x2_t t_hi =
        vmulq_f64(neg_log2(vld1q_f64(u_val + i + 2)), vld1q_f64(w + i + 2));
    const uint64x2_t k_lo = vcltq_f64(vld1q_f64(u_mask + i), p);
    const uint64x2_t k_hi = vcltq_f64(vld1q_f64(u_mask + i + 2), p);
    acc_lo = vaddq_f64(acc_lo, vreinterpretq_f64_u64(vandq_u64(
                                   vreinterpretq_u64_f64(t_lo), k_lo)));
    acc_hi = vaddq_f64(acc_hi, vreinterpretq_f64_u64(vandq_u64(
                                   vreinterpretq_u64_f64(t_hi), k_hi)));
  }
  double sum = hsum_pinned(acc_lo, acc_hi);
  for (std::size_t i = n4; i < n; ++i) {
    const double term = neg_log1(u_val[i]) * w[i];
    sum += (u_mask[i] < accept_p) ? term : 0.0;
  }
  return sum;
}

double rng_neg_log_dot_impl(RngLanes& st, const double* w, std::size_t n) {
  float64x2_t acc[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0),
                        vdupq_n_f64(0.0)};
  const std::size_t full = n / 4;
  for (std::size_t b = 0; b < full; ++b) {
    const Pair raw = rng_step(st);
    const int h = 2 * static_cast<int>(b & 1);
    acc[h] = vfmaq_f64(acc[h], neg_log2(uniform_from_bits2(raw.lo)),
                       vld1q_f64(w + 4 * b));
    acc[h + 1] = vfmaq_f64(acc[h + 1], neg_log2(uniform_from_bits2(raw.hi)),
                           vld1q_f64(w + 4 * b + 2));
  }
  double sum = hsum_pinned(acc[0], acc[1]) + hsum_pinned(acc[2], acc[3]);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    const Pair raw = rng_step(st);
    double u[4];
    vst1q_f64(u, uniform_from_bits2(raw.lo));
    vst1q_f64(u + 2, uniform_from_bits2(raw.hi));
    for (std::size_t j = 0; j < rem; ++j) {
      sum = std::fma(neg_log1(u[j]), w[4 * full + j], sum);
    }
  }
  return sum;
}

double rng_neg_log_masked_dot_impl(RngLanes& st, const double* w,
                                   std::size_t n, double accept_p) {
  const float64x2_t p = vdupq_n_f64(accept_p);
  float64x2_t acc[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0),
                        vdupq_n_f64(0.0)};
  const std::size_t full = n / 4;
  for (std::size_t b = 0; b < full; ++b) {
    const Pair rm = rng_step(st);
    const Pair rv = rng_step(st);
    const float64x2_t t_lo = vmulq_f64(neg_log2(uniform_from_bits2(rv.lo)),
                                       vld1q_f64(w + 4 * b));
    const float64x2_t t_hi = vmulq_f64(neg_log2(uniform_from_bits2(rv.hi)),
                                       vld1q_f64(w + 4 * b + 2));
    const uint64x2_t k_lo = vcltq_f64(uniform_from_bits2(rm.lo), p);
    const uint64x2_t k_hi = vcltq_f64(uniform_from_bits2(rm.hi), p);
    const int h = 2 * static_cast<int>(b & 1);
    acc[h] = vaddq_f64(acc[h], vreinterpretq_f64_u64(vandq_u64(
                                   vreinterpretq_u64_f64(t_lo), k_lo)));
    acc[h + 1] = vaddq_f64(acc[h + 1], vreinterpretq_f64_u64(vandq_u64(
                                           vreinterpretq_u64_f64(t_hi), k_hi)));
  }
  double sum = hsum_pinned(acc[0], acc[1]) + hsum_pinned(acc[2], acc[3]);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    const Pair rm = rng_step(st);
    const Pair rv = rng_step(st);
    double um[4], uv[4];
    vst1q_f64(um, uniform_from_bits2(rm.lo));
    vst1q_f64(um + 2, uniform_from_bits2(rm.hi));
    vst1q_f64(uv, uniform_from_bits2(rv.lo));
    vst1q_f64(uv + 2, uniform_from_bits2(rv.hi));
    for (std::size_t j = 0; j < rem; ++j) {
      const double term = neg_log1(uv[j]) * w[4 * full + j];
      sum += (um[j] < accept_p) ? term : 0.0;
    }
  }
  return sum;
}

const KernelVTable kTable = {
    &uniform01_blocks_impl,
    &neg_log_impl,
    &neg_log_dot_impl,
    &neg_log_masked_dot_impl,
    &rng_neg_log_dot_impl,
    &rng_neg_log_masked_dot_impl,
};

}  // namespace

const KernelVTable* neon_vtable() { return &kTable; }

}  // namespace kernels
}  // namespace selfdec

#endif  // __aarch64__
