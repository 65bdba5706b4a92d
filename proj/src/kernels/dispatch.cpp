#include "femnet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace femnet::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("FEMNET_KERNEL")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && backend_available(Backend::Avx2)) return Backend::Avx2;
    if (want == "neon" && backend_available(Backend::Neon)) return Backend::Neon;
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<int>& current() {
  static std::atomic<int> backend{static_cast<int>(detect())};
  return backend;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__) || defined(__ARM_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return static_cast<Backend>(current().load(std::memory_order_relaxed)); }

void set_backend(Backend b) {
  if (backend_available(b)) current().store(static_cast<int>(b), std::memory_order_relaxed);
}

void apply_layer(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2: apply_layer_avx2(w, in, out, batch, relu); return;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::Neon: apply_layer_neon(w, in, out, batch, relu); return;
#endif
    default: apply_layer_scalar(w, in, out, batch, relu); return;
  }
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2: return max_abs_diff_avx2(a, b, n);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::Neon: return max_abs_diff_neon(a, b, n);
#endif
    default: return max_abs_diff_scalar(a, b, n);
  }
}

}  // namespace femnet::kernels
