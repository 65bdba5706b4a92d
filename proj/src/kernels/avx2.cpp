// Compiled with -mavx2 (no -mfma); only called after a runtime CPU check.
#include "femnet/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace femnet::kernels {

void apply_layer_avx2(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu) {
  const std::size_t vec_end = batch & ~std::size_t{3};
  const __m256d zero = _mm256_setzero_pd();
  for (int r = 0; r < w.rows; ++r) {
    double* o = out + static_cast<std::size_t>(r) * batch;
    const double b = w.bias[r];
    const __m256d vb = _mm256_set1_pd(b);
    for (std::size_t s = 0; s < vec_end; s += 4) _mm256_storeu_pd(o + s, vb);
    for (std::size_t s = vec_end; s < batch; ++s) o[s] = b;

    for (int k = w.row_ptr[r]; k < w.row_ptr[r + 1]; ++k) {
      const double a = w.val[k];
      const __m256d va = _mm256_set1_pd(a);
      const double* x = in + static_cast<std::size_t>(w.col[k]) * batch;
      for (std::size_t s = 0; s < vec_end; s += 4) {
        const __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + s));
        _mm256_storeu_pd(o + s, _mm256_add_pd(_mm256_loadu_pd(o + s), t));
      }
      for (std::size_t s = vec_end; s < batch; ++s) {
        const double t = a * x[s];
        o[s] = o[s] + t;
      }
    }
    if (relu) {
      // max_pd(x, 0) returns 0 for x = -0.0 and for NaN in the first operand,
      // matching the scalar (x > 0 ? x : 0).
      for (std::size_t s = 0; s < vec_end; s += 4)
        _mm256_storeu_pd(o + s, _mm256_and_pd(_mm256_loadu_pd(o + s),
                                              _mm256_cmp_pd(_mm256_loadu_pd(o + s), zero, _CMP_GT_OQ)));
      for (std::size_t s = vec_end; s < batch; ++s) o[s] = o[s] > 0.0 ? o[s] : 0.0;
    }
  }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const std::size_t vec_end = n & ~std::size_t{3};
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d d = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    acc = _mm256_max_pd(acc, d);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = lanes[0];
  for (int j = 1; j < 4; ++j) m = lanes[j] > m ? lanes[j] : m;
  if (_mm256_movemask_pd(nan_seen) != 0) return std::nan("");
  for (std::size_t i = vec_end; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m || d != d) m = d;
  }
  return m;
}

}  // namespace femnet::kernels
