#include <cstdlib>
#include <cstring>
#include <string>

#include "siglab/kernels.hpp"

namespace siglab::kernels {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

namespace {

const Kernels& select() {
  const char* env = std::getenv("SGLAB_KERNEL");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return scalar();
#if defined(__x86_64__) || defined(_M_X64)
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return avx2();
#endif
#if defined(__aarch64__)
    if (std::strcmp(env, "neon") == 0) return neon();
#endif
    return scalar();
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) return avx2();
#endif
#if defined(__aarch64__)
  return neon();
#else
  return scalar();
#endif
}

}  // namespace

const Kernels& active() {
  static const Kernels& k = select();
  return k;
}

std::string available_names() {
  std::string names = "scalar";
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) names += ",avx2";
#endif
#if defined(__aarch64__)
  names += ",neon";
#endif
  return names;
}

}  // namespace siglab::kernels
