// AVX2+FMA backend. This translation unit is the only one compiled with
// -mavx2 -mfma; the dispatcher never selects it unless the CPU reports
// both features. State is kept in registers across whole kernel calls
// (the may_alias on __m256i otherwise forces a reload every step).

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "selfdec/kernels.hpp"

namespace selfdec {
namespace kernels {
namespace {

inline __m256i rotl64(__m256i x, int k) {
  return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

struct VecState {
  __m256i s0, s1, s2, s3;
};

inline VecState load_state(const RngLanes& st) {
  return {_mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.s[0])),
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.s[1])),
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.s[2])),
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(st.s[3]))};
}

inline void store_state(RngLanes& st, const VecState& v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(st.s[0]), v.s0);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(st.s[1]), v.s1);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(st.s[2]), v.s2);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(st.s[3]), v.s3);
}

inline __m256i rng_next(VecState& v) {
  const __m256i out = _mm256_add_epi64(v.s0, v.s3);
  const __m256i t = _mm256_slli_epi64(v.s1, 17);
  v.s2 = _mm256_xor_si256(v.s2, v.s0);
  v.s3 = _mm256_xor_si256(v.s3, v.s1);
  v.s1 = _mm256_xor_si256(v.s1, v.s2);
  v.s0 = _mm256_xor_si256(v.s0, v.s3);
  v.s2 = _mm256_xor_si256(v.s2, t);
  v.s3 = rotl64(v.s3, 45);
  return out;
}

inline __m256d uniform_from_bits4(__m256i raw) {
  const __m256i k = _mm256_srli_epi64(raw, 12);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  // (2^52 + k) - (2^52 - 0.5) = k + 0.5 exactly
  const __m256d k_half =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(k, magic)),
                    _mm256_set1_pd(0x1p52 - 0.5));
  return _mm256_mul_pd(k_half, _mm256_set1_pd(0x1p-52));
}

// Vector transcription of neg_log1 without the final sign flip; see
// kernels.hpp for the semantics. The biased exponent converts to double
// in one magic step, with the bias folded into the subtracted constant.
inline __m256d pos_log4(__m256d u) {
  using namespace detail;
  const __m256i bits = _mm256_castpd_si256(u);
  __m256i e = _mm256_srli_epi64(bits, 52);
  const __m256i mant =
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(mant, _mm256_set1_epi64x(0x3FE0000000000000LL)));
  const __m256d lt = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrtHalf), _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), lt);
  e = _mm256_add_epi64(e, _mm256_castpd_si256(lt));  // subtract 1 where true
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(kLogPoly[7]);
  for (int i = 6; i >= 0; --i) {
    p = _mm256_fmadd_pd(p, s, _mm256_set1_pd(kLogPoly[i]));
  }
  const __m256d two_r = _mm256_add_pd(r, r);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_r, s), p, two_r);
  const __m256i emagic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d ed =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(e, emagic)),
                    _mm256_set1_pd(0x1p52 + 1022.0));
  return _mm256_add_pd(_mm256_mul_pd(ed, _mm256_set1_pd(kLn2Hi)),
                       _mm256_fmadd_pd(ed, _mm256_set1_pd(kLn2Lo), log_m));
}

inline __m256d neg_log4(__m256d u) {
  return _mm256_xor_pd(pos_log4(u), _mm256_set1_pd(-0.0));
}

inline double hsum_pinned(__m256d acc) {
  double a[4];
  _mm256_storeu_pd(a, acc);
  return (a[0] + a[1]) + (a[2] + a[3]);
}

inline double hsum8_pinned(__m256d even, __m256d odd) {
  double a[4], b[4];
  _mm256_storeu_pd(a, even);
  _mm256_storeu_pd(b, odd);
  return ((a[0] + a[1]) + (a[2] + a[3])) + ((b[0] + b[1]) + (b[2] + b[3]));
}

void uniform01_blocks_impl(RngLanes& st, double* dst, std::size_t n_blocks) {
  VecState v = load_state(st);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    _mm256_storeu_pd(dst + 4 * b, uniform_from_bits4(rng_next(v)));
  }
  store_state(st, v);
}

void neg_log_impl(const double* u, double* out, std::size_t n) {
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    _mm256_storeu_pd(out + i, neg_log4(_mm256_loadu_pd(u + i)));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = neg_log1(u[i]);
}

double neg_log_dot_impl(const double* u, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d nl = neg_log4(_mm256_loadu_pd(u + i));
    acc = _mm256_fmadd_pd(nl, _mm256_loadu_pd(w + i), acc);
  }
  double sum = hsum_pinned(acc);
  for (std::size_t i = n4; i < n; ++i) {
    sum = std::fma(neg_log1(u[i]), w[i], sum);
  }
  return sum;
}

double neg_log_masked_dot_impl(const double* u_mask, const double* u_val,
                               const double* w, std::size_t n,
                               double accept_p) {
  const __m256d p = _mm256_set1_pd(accept_p);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d nl = neg_log4(_mm256_loadu_pd(u_val + i));
    const __m256d term = _mm256_mul_pd(nl, _mm256_loadu_pd(w + i));
    const __m256d keep =
        _mm256_cmp_pd(_mm256_loadu_pd(u_mask + i), p, _CMP_LT_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, keep));
  }
  double sum = hsum_pinned(acc);
  for (std::size_t i = n4; i < n; ++i) {
    const double term = neg_log1(u_val[i]) * w[i];
    sum += (u_mask[i] < accept_p) ? term : 0.0;
  }
  return sum;
}

double rng_neg_log_dot_impl(RngLanes& st, const double* w, std::size_t n) {
  VecState v = load_state(st);
  __m256d acc_even = _mm256_setzero_pd();
  __m256d acc_odd = _mm256_setzero_pd();
  const std::size_t full = n / 4;
  std::size_t b = 0;
  // two blocks in flight; deeper unrolls spill on 16 registers.
  // pos_log4 returns +log u (negative), folded in via fnmadd, which
  // equals fma(-log u, w, acc) exactly.
  for (; b + 2 <= full; b += 2) {
    const __m256d u0 = uniform_from_bits4(rng_next(v));
    const __m256d u1 = uniform_from_bits4(rng_next(v));
    acc_even =
        _mm256_fnmadd_pd(pos_log4(u0), _mm256_loadu_pd(w + 4 * b), acc_even);
    acc_odd =
        _mm256_fnmadd_pd(pos_log4(u1), _mm256_loadu_pd(w + 4 * b + 4), acc_odd);
  }
  if (b < full) {
    const __m256d u0 = uniform_from_bits4(rng_next(v));
    acc_even =
        _mm256_fnmadd_pd(pos_log4(u0), _mm256_loadu_pd(w + 4 * b), acc_even);
  }
  double sum = hsum8_pinned(acc_even, acc_odd);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    double u[4];
    _mm256_storeu_pd(u, uniform_from_bits4(rng_next(v)));
    for (std::size_t j = 0; j < rem; ++j) {
      sum = std::fma(neg_log1(u[j]), w[4 * full + j], sum);
    }
  }
  store_state(st, v);
  return sum;
}

double rng_neg_log_masked_dot_impl(RngLanes& st, const double* w,
                                   std::size_t n, double accept_p) {
  VecState v = load_state(st);
  const __m256d p = _mm256_set1_pd(accept_p);
  __m256d acc_even = _mm256_setzero_pd();
  __m256d acc_odd = _mm256_setzero_pd();
  const std::size_t full = n / 4;
  std::size_t b = 0;
  for (; b + 2 <= full; b += 2) {
    const __m256d um0 = uniform_from_bits4(rng_next(v));
    const __m256d uv0 = uniform_from_bits4(rng_next(v));
    const __m256d um1 = uniform_from_bits4(rng_next(v));
    const __m256d uv1 = uniform_from_bits4(rng_next(v));
    const __m256d t0 = _mm256_mul_pd(neg_log4(uv0), _mm256_loadu_pd(w + 4 * b));
    const __m256d t1 =
        _mm256_mul_pd(neg_log4(uv1), _mm256_loadu_pd(w + 4 * b + 4));
    const __m256d k0 = _mm256_cmp_pd(um0, p, _CMP_LT_OQ);
    const __m256d k1 = _mm256_cmp_pd(um1, p, _CMP_LT_OQ);
    acc_even = _mm256_add_pd(acc_even, _mm256_and_pd(t0, k0));
    acc_odd = _mm256_add_pd(acc_odd, _mm256_and_pd(t1, k1));
  }
  if (b < full) {
    const __m256d um = uniform_from_bits4(rng_next(v));
    const __m256d uv = uniform_from_bits4(rng_next(v));
    const __m256d term =
        _mm256_mul_pd(neg_log4(uv), _mm256_loadu_pd(w + 4 * b));
    const __m256d keep = _mm256_cmp_pd(um, p, _CMP_LT_OQ);
    acc_even = _mm256_add_pd(acc_even, _mm256_and_pd(term, keep));
  }
  double sum = hsum8_pinned(acc_even, acc_odd);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    double um[4], uv[4];
    _mm256_storeu_pd(um, uniform_from_bits4(rng_next(v)));
    _mm256_storeu_pd(uv, uniform_from_bits4(rng_next(v)));
    for (std::size_t j = 0; j < rem; ++j) {
      const double term = neg_log1(uv[j]) * w[4 * full + j];
      sum += (um[j] < accept_p) ? term : 0.0;
    }
  }
  store_state(st, v);
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

const KernelVTable* avx2_vtable() { return &kTable; }

}  // namespace kernels
}  // namespace selfdec
