#pragma once

#include <cstddef>

// Dense double-precision kernels behind every inner loop of the library.
//
// Each backend provides the same table of entry points. The scalar table is
// the reference; SIMD tables must reproduce it bit-for-bit on elementwise
// kernels (axpy, add_scaled, scale) and to rounding on reductions (dot,
// sum_sq), whose summation order differs. The active table is picked once,
// at first use, from what the CPU supports. Setting TSGD_KERNELS=scalar
// (or avx2 / neon) in the environment overrides the choice.
namespace tsgd::simd {

enum class Backend { scalar, avx2, neon };

struct Kernels {
  Backend backend;
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]^2
  double (*sum_sq)(const double* a, std::size_t n);
  // y[i] += s * x[i]
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
  // out[i] = a[i] + s * b[i]; out may alias a or b
  void (*add_scaled)(const double* a, const double* b, double s, double* out,
                     std::size_t n);
  // y[i] *= s
  void (*scale)(double s, double* y, std::size_t n);
};

const Kernels& scalar_kernels() noexcept;

// nullptr when the backend is not compiled in or the CPU lacks it.
const Kernels* avx2_kernels() noexcept;
const Kernels* neon_kernels() noexcept;

const Kernels& active() noexcept;

}  // namespace tsgd::simd
