#include "tsgd/numeric.hpp"

#include <cmath>
#include <string>

#include "tsgd/error.hpp"
#include "tsgd/kernels.hpp"

namespace tsgd {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Vector add_scaled(const Vector& a, const Vector& b, double s) {
  require_same_length(a.size(), b.size(), "add_scaled");
  Vector out(a.size());
  simd::active().add_scaled(a.data(), b.data(), s, out.data(), a.size());
  return out;
}

void axpy(double s, const Vector& x, Vector& y) {
  require_same_length(x.size(), y.size(), "axpy");
  simd::active().axpy(s, x.data(), y.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "dot");
  return simd::active().dot(a.data(), b.data(), a.size());
}

double norm_sq(const Vector& a) { return simd::active().sum_sq(a.data(), a.size()); }

bool is_finite(std::span<const double> a) noexcept {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Vector finite_diff_grad(const ScalarFunction& f, const Vector& x, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_grad: step h must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double up = f(probe);
    probe[j] = x[j] - h;
    const double down = f(probe);
    probe[j] = x[j];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff_grad: non-finite function value at coordinate " +
                             std::to_string(j),
                         static_cast<std::int64_t>(j));
    }
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace tsgd
