#pragma once

#include <cstddef>
#include <string>

namespace siglab::kernels {

// Row-major dense kernels. out = W x + b and the accumulating form
// out += W x used for the recurrent half of LSTM gate pre-activations.
struct Kernels {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[r] = dot(W row r, x) + bias[r]
  void (*matvec)(const double* w, const double* x, const double* bias,
                 double* out, std::size_t rows, std::size_t cols);
  // out[r] += dot(W row r, x)
  void (*matvec_acc)(const double* w, const double* x, double* out,
                     std::size_t rows, std::size_t cols);
};

// Scalar reference implementation; always available, used as the equivalence
// oracle for the SIMD variants.
const Kernels& scalar();

// Best variant for this machine, chosen once at startup. Respects the
// SGLAB_KERNEL environment variable ("scalar", "avx2", "neon") as an
// override; unknown or unsupported values fall back to scalar.
const Kernels& active();

// Names of all variants compiled in and usable on this CPU.
std::string available_names();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const Kernels& avx2();
#endif
#if defined(__aarch64__)
const Kernels& neon();
#endif

}  // namespace siglab::kernels
