// AVX2+FMA variants. Compiled with -mavx2 -mfma; only called after a runtime
// cpuid check (see kernels_dispatch.cpp).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "siglab/kernels.hpp"

namespace siglab::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_avx2(const double* w, const double* x, const double* bias,
                 double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_avx2(w + r * cols, x, cols) + bias[r];
  }
}

void matvec_acc_avx2(const double* w, const double* x, double* out,
                     std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] += dot_avx2(w + r * cols, x, cols);
  }
}

}  // namespace

const Kernels& avx2() {
  static const Kernels k{"avx2", dot_avx2, matvec_avx2, matvec_acc_avx2};
  return k;
}

}  // namespace siglab::kernels

#endif
