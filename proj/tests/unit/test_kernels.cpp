#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "tsgd/kernels.hpp"
#include "tsgd/rng.hpp"

using namespace tsgd;
using simd::Kernels;

namespace {

std::vector<const Kernels*> simd_backends() {
  std::vector<const Kernels*> out;
  if (const Kernels* k = simd::avx2_kernels()) out.push_back(k);
  if (const Kernels* k = simd::neon_kernels()) out.push_back(k);
  return out;
}

std::vector<double> random_values(Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() * scale;
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("active backend is one of the compiled tables") {
  const Kernels& k = simd::active();
  MESSAGE("active kernels: " << k.name);
  const bool known = &k == &simd::scalar_kernels() || &k == simd::avx2_kernels() ||
                     &k == simd::neon_kernels();
  CHECK(known);
}

TEST_CASE("scalar reference kernels") {
  const Kernels& k = simd::scalar_kernels();
  const double a[] = {1, 2, 3};
  const double b[] = {4, -5, 6};
  CHECK(k.dot(a, b, 3) == 12.0);
  CHECK(k.sum_sq(b, 3) == 77.0);
  double y[] = {1, 1, 1};
  k.axpy(2.0, a, y, 3);
  CHECK(y[2] == 7.0);
  double out[3];
  k.add_scaled(a, b, -1.0, out, 3);
  CHECK(out[1] == 7.0);
  k.scale(0.5, out, 3);
  CHECK(out[0] == -1.5);
  CHECK(k.dot(a, b, 0) == 0.0);
}

TEST_CASE("SIMD elementwise kernels match the scalar reference bit for bit") {
  const Kernels& ref = simd::scalar_kernels();
  Rng rng(77);
  for (const Kernels* k : simd_backends()) {
    CAPTURE(k->name);
    // Lengths around every vector-width boundary, plus larger sizes.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 1057u}) {
      CAPTURE(n);
      const auto x = random_values(rng, n, 3.0);
      const auto a = random_values(rng, n, 3.0);
      const double s = rng.normal();

      auto y_ref = random_values(rng, n, 1.0);
      auto y_simd = y_ref;
      ref.axpy(s, x.data(), y_ref.data(), n);
      k->axpy(s, x.data(), y_simd.data(), n);
      CHECK(bitwise_equal(y_ref, y_simd));

      std::vector<double> o_ref(n), o_simd(n);
      ref.add_scaled(a.data(), x.data(), s, o_ref.data(), n);
      k->add_scaled(a.data(), x.data(), s, o_simd.data(), n);
      CHECK(bitwise_equal(o_ref, o_simd));

      // in-place aliasing of the output with the first operand
      auto alias = a;
      k->add_scaled(alias.data(), x.data(), s, alias.data(), n);
      CHECK(bitwise_equal(o_ref, alias));

      k->scale(s, o_simd.data(), n);
      ref.scale(s, o_ref.data(), n);
      CHECK(bitwise_equal(o_ref, o_simd));
    }
  }
}

TEST_CASE("SIMD reductions match the scalar reference to rounding") {
  const Kernels& ref = simd::scalar_kernels();
  Rng rng(78);
  for (const Kernels* k : simd_backends()) {
    CAPTURE(k->name);
    for (int trial = 0; trial < 500; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(0, 300));
      const auto a = random_values(rng, n, 2.0);
      const auto b = random_values(rng, n, 2.0);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
      // Reordered summation error is bounded by n * eps * sum |a_i b_i|.
      const double bound = static_cast<double>(n + 1) * 2.3e-16 * abs_sum;
      CHECK(std::abs(ref.dot(a.data(), b.data(), n) - k->dot(a.data(), b.data(), n)) <= bound);
      double sq = 0.0;
      for (double v : a) sq += v * v;
      CHECK(std::abs(ref.sum_sq(a.data(), n) - k->sum_sq(a.data(), n)) <=
            static_cast<double>(n + 1) * 2.3e-16 * sq);
    }
  }
}

TEST_CASE("SIMD kernels propagate non-finite values") {
  for (const Kernels* k : simd_backends()) {
    std::vector<double> x(9, 1.0), y(9, 0.0);
    x[6] = std::nan("");
    k->axpy(1.0, x.data(), y.data(), 9);
    CHECK(std::isnan(y[6]));
    CHECK(std::isnan(k->dot(x.data(), x.data(), 9)));
  }
}
