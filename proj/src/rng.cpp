#include "selfdec/rng.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace selfdec {
namespace rng {

namespace {

std::uint64_t splitmix_next(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      buf_pos_(4),
      have_spare_normal_(false),
      spare_normal_(0.0) {
  std::uint64_t sm = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
  for (int lane = 0; lane < 4; ++lane) {
    bool all_zero = true;
    for (int word = 0; word < 4; ++word) {
      lanes_.s[word][lane] = splitmix_next(sm);
      all_zero = all_zero && lanes_.s[word][lane] == 0;
    }
    if (all_zero) lanes_.s[0][lane] = 1;  // xoshiro state must be nonzero
  }
}

void RngStream::refill() {
  kernels::uniform01_blocks(lanes_, buf_, 1);
  buf_pos_ = 0;
}

double RngStream::uniform01() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

void RngStream::fill_uniform01(double* dst, std::size_t n) {
  std::size_t i = 0;
  while (buf_pos_ < 4 && i < n) dst[i++] = buf_[buf_pos_++];
  const std::size_t blocks = (n - i) / 4;
  if (blocks > 0) {
    kernels::uniform01_blocks(lanes_, dst + i, blocks);
    i += 4 * blocks;
  }
  while (i < n) dst[i++] = uniform01();
}

double RngStream::exponential(double rate) {
  return kernels::neg_log1(uniform01()) / rate;
}

double RngStream::series_neg_log_dot(const double* w, std::size_t n) {
  buf_pos_ = 4;  // drop buffered uniforms; calls consume whole blocks
  return kernels::rng_neg_log_dot(lanes_, w, n);
}

double RngStream::series_neg_log_masked_dot(const double* w, std::size_t n,
                                            double accept_p) {
  buf_pos_ = 4;
  return kernels::rng_neg_log_masked_dot(lanes_, w, n, accept_p);
}

double RngStream::normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform01() - 1.0;
    y = 2.0 * uniform01() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s < 1e-300);
  const double f = std::sqrt(2.0 * kernels::neg_log1(s) / s);
  spare_normal_ = y * f;
  have_spare_normal_ = true;
  return x * f;
}

double RngStream::laplace(double rate) {
  const double sign = (uniform01() < 0.5) ? -1.0 : 1.0;
  return sign * kernels::neg_log1(uniform01()) / rate;
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::domain_error("poisson: mean must be nonnegative");
  }
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Count unit-rate exponential arrivals before the budget runs out;
    // equivalent to Knuth's product form without the e^{-mean} underflow.
    std::uint64_t k = 0;
    double acc = kernels::neg_log1(uniform01());
    while (acc <= mean) {
      ++k;
      acc += kernels::neg_log1(uniform01());
    }
    return k;
  }
  // Transformed rejection (Hormann, PTRS).
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    double u = uniform01() - 0.5;
    const double v = uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + kd * log_mean - std::lgamma(kd + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(kd);
  }
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::domain_error("gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (-kernels::neg_log1(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace rng
}  // namespace selfdec
