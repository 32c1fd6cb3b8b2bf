// AVX-512F backend for the fused series kernels. A zmm register holds
// one even/odd block pair, which is exactly the eight-way accumulator
// phase of the pinned reduction, so results stay bit-identical to the
// other backends. The element-order-sensitive array kernels (mod-4
// accumulator phase) are inherited from the AVX2 backend unchanged.
// Compiled with -mavx2 -mfma -mavx512f; selected only when the CPU
// reports avx512f.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "selfdec/kernels.hpp"

namespace selfdec {
namespace kernels {

const KernelVTable* avx2_vtable();

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

inline __m512i rng_next2(VecState& v) {
  const __m256i lo = rng_next(v);
  const __m256i hi = rng_next(v);
  return _mm512_inserti64x4(_mm512_castsi256_si512(lo), hi, 1);
}

inline __m512d uniform_from_bits8(__m512i raw) {
  const __m512i k = _mm512_srli_epi64(raw, 12);
  const __m512i magic = _mm512_set1_epi64(0x4330000000000000LL);
  const __m512d k_half =
      _mm512_sub_pd(_mm512_castsi512_pd(_mm512_or_si512(k, magic)),
                    _mm512_set1_pd(0x1p52 - 0.5));
  return _mm512_mul_pd(k_half, _mm512_set1_pd(0x1p-52));
}

inline __m512d pos_log8(__m512d u) {
  using namespace detail;
  const __m512i bits = _mm512_castpd_si512(u);
  __m512i e = _mm512_srli_epi64(bits, 52);
  const __m512i mant =
      _mm512_and_si512(bits, _mm512_set1_epi64(0x000FFFFFFFFFFFFFLL));
  __m512d m = _mm512_castsi512_pd(
      _mm512_or_si512(mant, _mm512_set1_epi64(0x3FE0000000000000LL)));
  const __mmask8 lt =
      _mm512_cmp_pd_mask(m, _mm512_set1_pd(kSqrtHalf), _CMP_LT_OQ);
  m = _mm512_mask_add_pd(m, lt, m, m);
  e = _mm512_mask_add_epi64(e, lt, e, _mm512_set1_epi64(-1));
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d r = _mm512_div_pd(_mm512_sub_pd(m, one), _mm512_add_pd(m, one));
  const __m512d s = _mm512_mul_pd(r, r);
  __m512d p = _mm512_set1_pd(kLogPoly[7]);
  for (int i = 6; i >= 0; --i) {
    p = _mm512_fmadd_pd(p, s, _mm512_set1_pd(kLogPoly[i]));
  }
  const __m512d two_r = _mm512_add_pd(r, r);
  const __m512d log_m = _mm512_fmadd_pd(_mm512_mul_pd(two_r, s), p, two_r);
  const __m512i emagic = _mm512_set1_epi64(0x4330000000000000LL);
  const __m512d ed =
      _mm512_sub_pd(_mm512_castsi512_pd(_mm512_or_si512(e, emagic)),
                    _mm512_set1_pd(0x1p52 + 1022.0));
  return _mm512_add_pd(_mm512_mul_pd(ed, _mm512_set1_pd(kLn2Hi)),
                       _mm512_fmadd_pd(ed, _mm512_set1_pd(kLn2Lo), log_m));
}

inline __m512d xor_pd512(__m512d x, __m512d y) {
  return _mm512_castsi512_pd(_mm512_xor_si512(_mm512_castpd_si512(x),
                                              _mm512_castpd_si512(y)));
}

inline double hsum8_pinned(__m512d acc) {
  double a[8];
  _mm512_storeu_pd(a, acc);
  return ((a[0] + a[1]) + (a[2] + a[3])) + ((a[4] + a[5]) + (a[6] + a[7]));
}

void uniform01_blocks_impl(RngLanes& st, double* dst, std::size_t n_blocks) {
  VecState v = load_state(st);
  std::size_t b = 0;
  for (; b + 2 <= n_blocks; b += 2) {
    _mm512_storeu_pd(dst + 4 * b, uniform_from_bits8(rng_next2(v)));
  }
  if (b < n_blocks) {
    const __m512d u = uniform_from_bits8(
        _mm512_castsi256_si512(rng_next(v)));
    _mm256_storeu_pd(dst + 4 * b, _mm512_castpd512_pd256(u));
  }
  store_state(st, v);
}

void neg_log_impl(const double* u, double* out, std::size_t n) {
  const __m512d sign = _mm512_set1_pd(-0.0);
  const std::size_t n8 = n - (n % 8);
  for (std::size_t i = 0; i < n8; i += 8) {
    _mm512_storeu_pd(out + i,
                     xor_pd512(pos_log8(_mm512_loadu_pd(u + i)), sign));
  }
  for (std::size_t i = n8; i < n; ++i) out[i] = neg_log1(u[i]);
}

double rng_neg_log_dot_impl(RngLanes& st, const double* w, std::size_t n) {
  VecState v = load_state(st);
  __m512d acc = _mm512_setzero_pd();
  const std::size_t full = n / 4;
  std::size_t b = 0;
  for (; b + 2 <= full; b += 2) {
    const __m512d u = uniform_from_bits8(rng_next2(v));
    acc = _mm512_fnmadd_pd(pos_log8(u), _mm512_loadu_pd(w + 4 * b), acc);
  }
  if (b < full) {
    // final even block joins the low-half accumulator chain in order
    const __m512d u =
        uniform_from_bits8(_mm512_castsi256_si512(rng_next(v)));
    const __m256d lo = _mm512_castpd512_pd256(acc);
    const __m256d nl = _mm512_castpd512_pd256(pos_log8(u));
    const __m256d lo2 = _mm256_fnmadd_pd(nl, _mm256_loadu_pd(w + 4 * b), lo);
    acc = _mm512_insertf64x4(acc, lo2, 0);
  }
  double sum = hsum8_pinned(acc);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    double u[8];
    _mm512_storeu_pd(
        u, uniform_from_bits8(_mm512_castsi256_si512(rng_next(v))));
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
  const __m512d p = _mm512_set1_pd(accept_p);
  __m512d acc = _mm512_setzero_pd();
  const std::size_t full = n / 4;
  std::size_t b = 0;
  for (; b + 2 <= full; b += 2) {
    // consumption order per block is mask then value
    const __m256i m0 = rng_next(v);
    const __m256i v0 = rng_next(v);
    const __m256i m1 = rng_next(v);
    const __m256i v1 = rng_next(v);
    const __m512d um = uniform_from_bits8(
        _mm512_inserti64x4(_mm512_castsi256_si512(m0), m1, 1));
    const __m512d uv = uniform_from_bits8(
        _mm512_inserti64x4(_mm512_castsi256_si512(v0), v1, 1));
    const __m512d nl = xor_pd512(pos_log8(uv), _mm512_set1_pd(-0.0));
    const __m512d term = _mm512_mul_pd(nl, _mm512_loadu_pd(w + 4 * b));
    const __mmask8 keep = _mm512_cmp_pd_mask(um, p, _CMP_LT_OQ);
    // zero-masked move, then add: identical to the and-then-add of the
    // narrower backends even on signed zeros
    acc = _mm512_add_pd(acc, _mm512_maskz_mov_pd(keep, term));
  }
  if (b < full) {
    const __m512d um =
        uniform_from_bits8(_mm512_castsi256_si512(rng_next(v)));
    const __m512d uv =
        uniform_from_bits8(_mm512_castsi256_si512(rng_next(v)));
    const __m256d nl = _mm256_xor_pd(
        _mm512_castpd512_pd256(pos_log8(uv)), _mm256_set1_pd(-0.0));
    const __m256d term = _mm256_mul_pd(nl, _mm256_loadu_pd(w + 4 * b));
    const __m256d keep_mask = _mm256_cmp_pd(
        _mm512_castpd512_pd256(um), _mm256_set1_pd(accept_p), _CMP_LT_OQ);
    const __m256d lo = _mm256_add_pd(_mm512_castpd512_pd256(acc),
                                     _mm256_and_pd(term, keep_mask));
    acc = _mm512_insertf64x4(acc, lo, 0);
  }
  double sum = hsum8_pinned(acc);
  const std::size_t rem = n % 4;
  if (rem > 0) {
    double um[8], uv[8];
    _mm512_storeu_pd(
        um, uniform_from_bits8(_mm512_castsi256_si512(rng_next(v))));
    _mm512_storeu_pd(
        uv, uniform_from_bits8(_mm512_castsi256_si512(rng_next(v))));
    for (std::size_t j = 0; j < rem; ++j) {
      const double term = neg_log1(uv[j]) * w[4 * full + j];
      sum += (um[j] < accept_p) ? term : 0.0;
    }
  }
  store_state(st, v);
  return sum;
}

KernelVTable make_table() {
  // array kernels carry a four-way accumulator phase that does not widen;
  // they come from the AVX2 backend verbatim
  KernelVTable t = *avx2_vtable();
  t.uniform01_blocks = &uniform01_blocks_impl;
  t.neg_log = &neg_log_impl;
  t.rng_neg_log_dot = &rng_neg_log_dot_impl;
  t.rng_neg_log_masked_dot = &rng_neg_log_masked_dot_impl;
  return t;
}

}  // namespace

const KernelVTable* avx512_vtable() {
  static const KernelVTable table = make_table();
  return &table;
}

}  // namespace kernels
}  // namespace selfdec
