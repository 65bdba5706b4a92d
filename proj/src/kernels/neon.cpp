#include "femnet/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>

#include <cmath>

namespace femnet::kernels {

// vmulq + vaddq kept separate (no vfmaq) to stay bit-identical with the scalar path.
void apply_layer_neon(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu) {
  const std::size_t vec_end = batch & ~std::size_t{1};
  const float64x2_t zero = vdupq_n_f64(0.0);
  for (int r = 0; r < w.rows; ++r) {
    double* o = out + static_cast<std::size_t>(r) * batch;
    const double b = w.bias[r];
    const float64x2_t vb = vdupq_n_f64(b);
    for (std::size_t s = 0; s < vec_end; s += 2) vst1q_f64(o + s, vb);
    for (std::size_t s = vec_end; s < batch; ++s) o[s] = b;

    for (int k = w.row_ptr[r]; k < w.row_ptr[r + 1]; ++k) {
      const double a = w.val[k];
      const float64x2_t va = vdupq_n_f64(a);
      const double* x = in + static_cast<std::size_t>(w.col[k]) * batch;
      for (std::size_t s = 0; s < vec_end; s += 2) {
        const float64x2_t t = vmulq_f64(va, vld1q_f64(x + s));
        vst1q_f64(o + s, vaddq_f64(vld1q_f64(o + s), t));
      }
      for (std::size_t s = vec_end; s < batch; ++s) {
        const double t = a * x[s];
        o[s] = o[s] + t;
      }
    }
    if (relu) {
      for (std::size_t s = 0; s < vec_end; s += 2) {
        const float64x2_t v = vld1q_f64(o + s);
        const uint64x2_t pos = vcgtq_f64(v, zero);
        vst1q_f64(o + s, vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(v), pos)));
      }
      for (std::size_t s = vec_end; s < batch; ++s) o[s] = o[s] > 0.0 ? o[s] : 0.0;
    }
  }
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  bool nan_seen = false;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const uint64x2_t ordered = vceqq_f64(d, d);
    if (vgetq_lane_u64(ordered, 0) == 0 || vgetq_lane_u64(ordered, 1) == 0) nan_seen = true;
    acc = vmaxq_f64(acc, d);
  }
  if (nan_seen) return std::nan("");
  m = vmaxvq_f64(acc);
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m || d != d) m = d;
  }
  return m;
}

}  // namespace femnet::kernels
#endif
