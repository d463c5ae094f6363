#include <cstdlib>
#include <string_view>

#include "tsgd/kernels.hpp"

namespace tsgd::simd {

#if defined(TSGD_HAVE_AVX2)
const Kernels* avx2_table() noexcept;
#endif
#if defined(TSGD_HAVE_NEON)
const Kernels* neon_table() noexcept;
#endif

const Kernels* avx2_kernels() noexcept {
#if defined(TSGD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels* neon_kernels() noexcept {
#if defined(TSGD_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return neon_table();
#else
  return nullptr;
#endif
}

namespace {

const Kernels& select() noexcept {
  if (const char* env = std::getenv("TSGD_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return *avx2_kernels();
    if (want == "neon" && neon_kernels()) return *neon_kernels();
  }
  if (const Kernels* k = avx2_kernels()) return *k;
  if (const Kernels* k = neon_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& active() noexcept {
  static const Kernels& table = select();
  return table;
}

}  // namespace tsgd::simd
