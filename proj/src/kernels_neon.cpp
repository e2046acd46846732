#if defined(__aarch64__)

#include <arm_neon.h>

#include "siglab/kernels.hpp"

namespace siglab::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_neon(const double* w, const double* x, const double* bias,
                 double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_neon(w + r * cols, x, cols) + bias[r];
  }
}

void matvec_acc_neon(const double* w, const double* x, double* out,
                     std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] += dot_neon(w + r * cols, x, cols);
  }
}

}  // namespace

const Kernels& neon() {
  static const Kernels k{"neon", dot_neon, matvec_neon, matvec_acc_neon};
  return k;
}

}  // namespace siglab::kernels

#endif
