#include "siglab/kernels.hpp"

namespace siglab::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_scalar(const double* w, const double* x, const double* bias,
                   double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_scalar(w + r * cols, x, cols) + bias[r];
  }
}

void matvec_acc_scalar(const double* w, const double* x, double* out,
                       std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] += dot_scalar(w + r * cols, x, cols);
  }
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{"scalar", dot_scalar, matvec_scalar,
                         matvec_acc_scalar};
  return k;
}

}  // namespace siglab::kernels
