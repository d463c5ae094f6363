#include <doctest.h>

#include <cmath>
#include <vector>

#include "tsgd/error.hpp"
#include "tsgd/numeric.hpp"
#include "tsgd/rng.hpp"

using namespace tsgd;

TEST_CASE("add_scaled examples") {
  CHECK(add_scaled({1, 2}, {3, 4}, 0) == Vector{1, 2});
  CHECK(add_scaled({1, 2}, {3, 4}, 1) == Vector{4, 6});
  CHECK(add_scaled({0, 0}, {3, 4}, -0.5) == Vector{-1.5, -2});
}

TEST_CASE("add_scaled leaves inputs untouched and rejects mismatched lengths") {
  const Vector a{1, 2};
  const Vector b{3, 4};
  (void)add_scaled(a, b, 2.0);
  CHECK(a == Vector{1, 2});
  CHECK(b == Vector{3, 4});
  CHECK_THROWS_AS(add_scaled(Vector{1, 2}, Vector{1, 2, 3}, 1.0), DimensionError);
  Vector y{1, 2};
  CHECK_THROWS_AS(axpy(1.0, Vector{1}, y), DimensionError);
}

TEST_CASE("norm_sq examples") {
  CHECK(norm_sq({0, 0, 0}) == 0.0);
  CHECK(norm_sq({3, 4}) == 25.0);
  CHECK(norm_sq({-1, 1, 2}) == 6.0);
}

TEST_CASE("add_scaled round trip recovers the input") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 40));
    Vector a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-10, 10);
      b[i] = rng.uniform(-10, 10);
    }
    const double s = rng.uniform(-3, 3);
    const Vector back = add_scaled(add_scaled(a, b, s), b, -s);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(back[i] - a[i]) <= 1e-12);
  }
}

TEST_CASE("norm_sq is zero exactly for the zero vector") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 20));
    Vector a(n, 0.0);
    CHECK(norm_sq(a) == 0.0);
    a[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))] =
        rng.uniform(1e-150, 1.0);
    CHECK(norm_sq(a) > 0.0);
  }
}

TEST_CASE("finite_diff_grad examples") {
  const Vector g = finite_diff_grad([](const Vector& x) { return norm_sq(x); }, {1, 2}, 1e-5);
  CHECK(std::abs(g[0] - 2.0) < 1e-8);
  CHECK(std::abs(g[1] - 4.0) < 1e-8);

  const Vector zero = finite_diff_grad([](const Vector&) { return 3.25; }, {7, -1, 2}, 1e-5);
  for (double v : zero) CHECK(std::abs(v) < 1e-10);

  const Vector ones = finite_diff_grad(
      [](const Vector& x) {
        double s = 0;
        for (double v : x) s += v;
        return s;
      },
      {5, -3, 0}, 1e-5);
  for (double v : ones) CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("finite_diff_grad agrees with analytic gradients") {
  // f(x) = sum_j sin(x_j) * x_{j+1} + exp(x_0 / 4)
  auto f = [](const Vector& x) {
    double s = std::exp(x[0] / 4);
    for (std::size_t j = 0; j + 1 < x.size(); ++j) s += std::sin(x[j]) * x[j + 1];
    return s;
  };
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(6);
    for (double& v : x) v = rng.uniform(-2, 2);
    Vector analytic(6, 0.0);
    analytic[0] = std::exp(x[0] / 4) / 4;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      analytic[j] += std::cos(x[j]) * x[j + 1];
      analytic[j + 1] += std::sin(x[j]);
    }
    const Vector numeric = finite_diff_grad(f, x, 1e-5);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double denom = std::max(std::abs(analytic[j]), 1e-3);
      CHECK(std::abs(numeric[j] - analytic[j]) / denom < 1e-6);
    }
  }
}

TEST_CASE("finite_diff_grad error paths") {
  auto f = [](const Vector& x) { return x[1] > 1.0 ? std::nan("") : x[0]; };
  try {
    (void)finite_diff_grad(f, {0.0, 1.0}, 1e-3);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.where() == 1);
  }
  CHECK_THROWS_AS(finite_diff_grad(f, {0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("is_finite") {
  CHECK(is_finite(Vector{1, 2}));
  CHECK_FALSE(is_finite(Vector{1, std::nan("")}));
  CHECK_FALSE(is_finite(Vector{HUGE_VAL}));
}

TEST_CASE("Rng streams are reproducible") {
  Rng a(2024), b(2024), c(2025);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("Rng matches the SplitMix64 reference stream") {
  // Reference values of SplitMix64 seeded with 0.
  Rng rng(0);
  CHECK(rng.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next_u64() == 0x06c45d188009454fULL);
}

TEST_CASE("Rng uniform and normal moments") {
  Rng rng(9);
  double sum = 0, sum_sq = 0, usum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    usum += u;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
  CHECK(std::abs(usum / n - 0.5) < 0.01);
}
