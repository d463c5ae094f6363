#include <arm_neon.h>

#include "tsgd/kernels.hpp"

namespace tsgd::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq(const double* a, std::size_t n) { return dot(a, a, n); }

void axpy(double s, const double* x, double* y, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(sv, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + s * x[i];
}

void add_scaled(const double* a, const double* b, double s, double* out,
                std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vmulq_f64(sv, vld1q_f64(b + i))));
  }
  for (; i < n; ++i) out[i] = a[i] + s * b[i];
}

void scale(double s, double* y, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(sv, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] *= s;
}

constexpr Kernels kTable{Backend::neon, "neon", dot, sum_sq, axpy, add_scaled, scale};

}  // namespace

const Kernels* neon_table() noexcept { return &kTable; }

}  // namespace tsgd::simd
