// Scalar reference backend. Mirrors the vector backends operation for
// operation (same four-lane RNG interleave, same four-accumulator
// reduction order), so outputs are bit-identical across backends.
// Built with -ffp-contract=off; fused operations appear only as explicit
// std::fma.

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "selfdec/kernels.hpp"

namespace selfdec {
namespace kernels {
namespace {

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// One xoshiro256+ step across the four lanes; out[j] is lane j's draw.
// Only the top 52 bits feed the uniforms, which is the + variant's
// intended use for doubles.
inline void rng_step(RngLanes& st, std::uint64_t out[4]) {
  for (int j = 0; j < 4; ++j) {
    out[j] = st.s[0][j] + st.s[3][j];
  }
  for (int j = 0; j < 4; ++j) {
    const std::uint64_t t = st.s[1][j] << 17;
    st.s[2][j] ^= st.s[0][j];
    st.s[3][j] ^= st.s[1][j];
    st.s[1][j] ^= st.s[2][j];
    st.s[0][j] ^= st.s[3][j];
    st.s[2][j] ^= t;
    st.s[3][j] = rotl64(st.s[3][j], 45);
  }
}

void uniform01_blocks_impl(RngLanes& st, double* dst, std::size_t n_blocks) {
  std::uint64_t raw[4];
  for (std::size_t b = 0; b < n_blocks; ++b) {
    rng_step(st, raw);
    for (int j = 0; j < 4; ++j) dst[4 * b + j] = uniform_from_bits(raw[j]);
  }
}

void neg_log_impl(const double* u, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = neg_log1(u[i]);
}

double neg_log_dot_impl(const double* u, const double* w, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int j = 0; j < 4; ++j) {
      acc[j] = std::fma(neg_log1(u[i + j]), w[i + j], acc[j]);
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    sum = std::fma(neg_log1(u[i]), w[i], sum);
  }
  return sum;
}

double neg_log_masked_dot_impl(const double* u_mask, const double* u_val,
                               const double* w, std::size_t n,
                               double accept_p) {
  // mul-select-add (no fma) so the masked term is formed the same way in
  // every backend.
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n - (n % 4);
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int j = 0; j < 4; ++j) {
      const double term = neg_log1(u_val[i + j]) * w[i + j];
      acc[j] += (u_mask[i + j] < accept_p) ? term : 0.0;
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = n4; i < n; ++i) {
    const double term = neg_log1(u_val[i]) * w[i];
    sum += (u_mask[i] < accept_p) ? term : 0.0;
  }
  return sum;
}

// Fused forms: element i of the reduction sits in accumulator
// 4*(block & 1) + lane, i.e. an eight-way phase, and the final sum is
// ((a0+a1)+(a2+a3)) + ((a4+a5)+(a6+a7)). Trailing lanes of a partial
// last block are drawn and discarded.
double rng_neg_log_dot_impl(RngLanes& st, const double* w, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  const std::size_t full = n / 4;
  std::uint64_t raw[4];
  for (std::size_t b = 0; b < full; ++b) {
    rng_step(st, raw);
    double* half = acc + 4 * (b & 1);
    for (int j = 0; j < 4; ++j) {
      half[j] = std::fma(neg_log1(uniform_from_bits(raw[j])), w[4 * b + j],
                         half[j]);
    }
  }
  double sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
               ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  const std::size_t rem = n % 4;
  if (rem > 0) {
    rng_step(st, raw);
    for (std::size_t j = 0; j < rem; ++j) {
      sum = std::fma(neg_log1(uniform_from_bits(raw[j])), w[4 * full + j], sum);
    }
  }
  return sum;
}

double rng_neg_log_masked_dot_impl(RngLanes& st, const double* w,
                                   std::size_t n, double accept_p) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  const std::size_t full = n / 4;
  std::uint64_t raw_mask[4];
  std::uint64_t raw_val[4];
  for (std::size_t b = 0; b < full; ++b) {
    rng_step(st, raw_mask);
    rng_step(st, raw_val);
    double* half = acc + 4 * (b & 1);
    for (int j = 0; j < 4; ++j) {
      const double term =
          neg_log1(uniform_from_bits(raw_val[j])) * w[4 * b + j];
      half[j] += (uniform_from_bits(raw_mask[j]) < accept_p) ? term : 0.0;
    }
  }
  double sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
               ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  const std::size_t rem = n % 4;
  if (rem > 0) {
    rng_step(st, raw_mask);
    rng_step(st, raw_val);
    for (std::size_t j = 0; j < rem; ++j) {
      const double term =
          neg_log1(uniform_from_bits(raw_val[j])) * w[4 * full + j];
      sum += (uniform_from_bits(raw_mask[j]) < accept_p) ? term : 0.0;
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

const KernelVTable* scalar_vtable() { return &kTable; }

}  // namespace kernels
}  // namespace selfdec
