#include "femnet/kernels.hpp"

#include <cmath>

namespace femnet::kernels {

void apply_layer_scalar(const CsrView& w, const double* in, double* out, std::size_t batch, bool relu) {
  for (int r = 0; r < w.rows; ++r) {
    double* o = out + static_cast<std::size_t>(r) * batch;
    const double b = w.bias[r];
    for (std::size_t s = 0; s < batch; ++s) o[s] = b;
    for (int k = w.row_ptr[r]; k < w.row_ptr[r + 1]; ++k) {
      const double a = w.val[k];
      const double* x = in + static_cast<std::size_t>(w.col[k]) * batch;
      for (std::size_t s = 0; s < batch; ++s) {
        const double t = a * x[s];
        o[s] = o[s] + t;
      }
    }
    if (relu)
      for (std::size_t s = 0; s < batch; ++s) o[s] = o[s] > 0.0 ? o[s] : 0.0;
  }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m || d != d) m = d;  // propagate NaN
  }
  return m;
}

}  // namespace femnet::kernels
