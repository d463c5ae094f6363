#include "tsgd/kernels.hpp"

namespace tsgd::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + s * x[i];
}

void add_scaled(const double* a, const double* b, double s, double* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

void scale(double s, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= s;
}

constexpr Kernels kTable{Backend::scalar, "scalar", dot, sum_sq, axpy, add_scaled, scale};

}  // namespace

const Kernels& scalar_kernels() noexcept { return kTable; }

}  // namespace tsgd::simd
