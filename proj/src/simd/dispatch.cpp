#include "gkp/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace gkp::simd {

#if defined(GKP_BUILD_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(GKP_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable* selected = [] {
    const char* env = std::getenv("GKP_SIMD");
    const std::string choice = env ? env : "auto";
    if (choice == "scalar") return &scalar_kernels();
    if (const KernelTable* v = avx2_kernels()) return v;
    return &scalar_kernels();
  }();
  return *selected;
}

}  // namespace gkp::simd
