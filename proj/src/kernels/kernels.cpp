#include "selfdec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace selfdec {
namespace kernels {

const KernelVTable* scalar_vtable();
#if defined(__x86_64__) || defined(_M_X64)
const KernelVTable* avx2_vtable();
const KernelVTable* avx512_vtable();
#endif
#if defined(__aarch64__)
const KernelVTable* neon_vtable();
#endif

namespace {

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kAvx512:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx512f") &&
             __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelVTable* table_of(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return scalar_vtable();
    case Backend::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return avx2_vtable();
#else
      return nullptr;
#endif
    case Backend::kAvx512:
#if defined(__x86_64__) || defined(_M_X64)
      return avx512_vtable();
#else
      return nullptr;
#endif
    case Backend::kNeon:
#if defined(__aarch64__)
      return neon_vtable();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend detect() {
  if (const char* env = std::getenv("SELFDEC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::kScalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has(Backend::kAvx2)) {
      return Backend::kAvx2;
    }
    if (std::strcmp(env, "avx512") == 0 && cpu_has(Backend::kAvx512)) {
      return Backend::kAvx512;
    }
    if (std::strcmp(env, "neon") == 0 && cpu_has(Backend::kNeon)) {
      return Backend::kNeon;
    }
  }
  if (cpu_has(Backend::kAvx512)) return Backend::kAvx512;
  if (cpu_has(Backend::kAvx2)) return Backend::kAvx2;
  if (cpu_has(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

struct Active {
  std::atomic<const KernelVTable*> table;
  std::atomic<Backend> backend;
  Active() {
    const Backend b = detect();
    backend.store(b);
    table.store(table_of(b));
  }
};

Active& active() {
  static Active a;
  return a;
}

}  // namespace

Backend active_backend() { return active().backend.load(); }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kAvx512:
      return "avx512";
    case Backend::kNeon:
      return "neon";
  }
  return "?";
}

bool backend_supported(Backend b) { return cpu_has(b); }

void force_backend(Backend b) {
  if (!cpu_has(b)) {
    throw std::invalid_argument("kernel backend not supported on this machine");
  }
  active().backend.store(b);
  active().table.store(table_of(b));
}

const KernelVTable* vtable_for(Backend b) {
  return cpu_has(b) ? table_of(b) : nullptr;
}

void uniform01_blocks(RngLanes& state, double* dst, std::size_t n_blocks) {
  active().table.load()->uniform01_blocks(state, dst, n_blocks);
}

void neg_log(const double* u, double* out, std::size_t n) {
  active().table.load()->neg_log(u, out, n);
}

double neg_log_dot(const double* u, const double* w, std::size_t n) {
  return active().table.load()->neg_log_dot(u, w, n);
}

double neg_log_masked_dot(const double* u_mask, const double* u_val,
                          const double* w, std::size_t n, double accept_p) {
  return active().table.load()->neg_log_masked_dot(u_mask, u_val, w, n,
                                                   accept_p);
}

double rng_neg_log_dot(RngLanes& state, const double* w, std::size_t n) {
  return active().table.load()->rng_neg_log_dot(state, w, n);
}

double rng_neg_log_masked_dot(RngLanes& state, const double* w, std::size_t n,
                              double accept_p) {
  return active().table.load()->rng_neg_log_masked_dot(state, w, n, accept_p);
}

}  // namespace kernels
}  // namespace selfdec
