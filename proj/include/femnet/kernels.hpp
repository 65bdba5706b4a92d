#pragma once

#include <cstddef>
#include <string_view>

// Batched inner loops for network evaluation. Every backend performs the
// same floating-point operations in the same order (multiply, then add, no
// fused multiply-add), so all backends are bit-identical to the scalar one.

namespace femnet::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend b);

/// Read-only view of a CSR weight matrix plus bias.
struct CsrView {
  int rows = 0;
  const int* row_ptr = nullptr;
  const int* col = nullptr;
  const double* val = nullptr;
  const double* bias = nullptr;
};

/// out[r*batch + s] = bias[r] + sum_k val[k] * in[col[k]*batch + s], in CSR order,
/// followed by max(., 0) when relu is set.
void apply_layer_scalar(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu);
double max_abs_diff_scalar(const double* a, const double* b, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void apply_layer_avx2(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu);
double max_abs_diff_avx2(const double* a, const double* b, std::size_t n);
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
void apply_layer_neon(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu);
double max_abs_diff_neon(const double* a, const double* b, std::size_t n);
#endif

bool backend_available(Backend b);

/// Backend used by the dispatching entry points. Chosen on first use from
/// CPU features; FEMNET_KERNEL=scalar|avx2|neon overrides.
Backend active_backend();
void set_backend(Backend b);

void apply_layer(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu);
double max_abs_diff(const double* a, const double* b, std::size_t n);

}  // namespace femnet::kernels
