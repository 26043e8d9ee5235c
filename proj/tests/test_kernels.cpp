#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "glueopt/kernels.hpp"

using namespace glueopt::kernels;

namespace {
struct ThreadGuard {
  int saved;
  ThreadGuard() : saved(threads()) {}
  ~ThreadGuard() { set_threads(saved); }
};

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = uni(rng);
  return v;
}

std::vector<std::uint8_t> random_mask(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> m(n);
  for (auto& x : m) x = (rng() & 3) != 0;  // ~75 percent free
  return m;
}
}  // namespace

TEST_CASE("serial and parallel kernels agree bitwise across sizes") {
  ThreadGuard guard;
  set_threads(0);  // whatever OpenMP gives us
  // sizes straddling the reduction block boundary
  for (std::size_t n : {std::size_t(1), std::size_t(1000), kReduceBlock - 1,
                        kReduceBlock, kReduceBlock + 1, 3 * kReduceBlock + 17}) {
    auto a = random_vec(n, 11 + n);
    auto b = random_vec(n, 23 + n);
    auto mask = random_mask(n, 31 + n);

    CHECK(dot_serial(a.data(), b.data(), n) == dot_omp(a.data(), b.data(), n));
    CHECK(sum_serial(a.data(), n) == sum_omp(a.data(), n));

    auto y1 = b, y2 = b;
    axpy_serial(0.37, a.data(), y1.data(), n);
    axpy_omp(0.37, a.data(), y2.data(), n);
    CHECK(y1 == y2);

    y1 = b;
    y2 = b;
    xpay_serial(-1.21, a.data(), y1.data(), n);
    xpay_omp(-1.21, a.data(), y2.data(), n);
    CHECK(y1 == y2);

    std::vector<double> z1(n), z2(n);
    masked_scale_serial(2.5, a.data(), mask.data(), z1.data(), n);
    masked_scale_omp(2.5, a.data(), mask.data(), z2.data(), n);
    CHECK(z1 == z2);
  }
}

TEST_CASE("reductions are identical for every thread count") {
  ThreadGuard guard;
  std::size_t n = 2 * kReduceBlock + 1234;
  auto a = random_vec(n, 5);
  auto b = random_vec(n, 6);
  set_threads(1);
  double d1 = dot(a.data(), b.data(), n);
  double s1 = sum(a.data(), n);
  for (int t : {2, 3, 4, 8}) {
    set_threads(t);
    CHECK(dot(a.data(), b.data(), n) == d1);  // bitwise
    CHECK(sum(a.data(), n) == s1);
  }
}

TEST_CASE("blocked sum matches a long-double reference closely") {
  std::size_t n = kReduceBlock + 100;
  auto a = random_vec(n, 9);
  long double acc = 0;
  for (double x : a) acc += x;
  CHECK(sum_serial(a.data(), n) == doctest::Approx((double)acc).epsilon(1e-12));
}

TEST_CASE("masked laplacian matches a direct stencil evaluation") {
  int nx = 23, ny = 17;
  double h = 0.1;
  std::size_t n = (std::size_t)nx * ny;
  auto u = random_vec(n, 77);
  auto mask = random_mask(n, 78);
  // border is constrained, as in real problems
  for (int i = 0; i < nx; ++i) mask[i] = mask[(std::size_t)(ny - 1) * nx + i] = 0;
  for (int j = 0; j < ny; ++j) mask[(std::size_t)j * nx] = mask[(std::size_t)j * nx + nx - 1] = 0;

  std::vector<double> y(n), ref(n);
  apply_laplacian_serial(u.data(), mask.data(), nx, ny, h, y.data());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      std::size_t k = (std::size_t)j * nx + i;
      if (!mask[k]) {
        ref[k] = 0;
        continue;
      }
      double c = 4 * u[k] - u[k - 1] - u[k + 1] - u[k - nx] - u[k + nx];
      ref[k] = c / (h * h);
    }
  for (std::size_t k = 0; k < n; ++k) CHECK(y[k] == doctest::Approx(ref[k]).epsilon(1e-15));

  std::vector<double> y2(n);
  apply_laplacian_omp(u.data(), mask.data(), nx, ny, h, y2.data());
  CHECK(y == y2);
}

TEST_CASE("thread controls report the effective count") {
  ThreadGuard guard;
  set_threads(1);
  CHECK(threads() == 1);
  CHECK_FALSE(parallel_active());
  set_threads(4);
  CHECK((threads() == 4 || threads() == 1));  // 1 when built without OpenMP
  set_threads(0);
  CHECK(threads() >= 1);  // resolves to the runtime default
}
