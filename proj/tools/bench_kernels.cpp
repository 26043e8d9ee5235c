// Timing comparison of the serial and OpenMP kernel families on a
// masked disc instance, plus a bitwise equality check of their results.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "glueopt/grid.hpp"
#include "glueopt/kernels.hpp"

using namespace glueopt;

namespace {

template <class F>
double time_best(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::init_from_env();
  int n_side = argc > 1 ? std::atoi(argv[1]) : 2048;
  int reps = argc > 2 ? std::atoi(argv[2]) : 7;

  auto domain = geometry::DomainSpec::disc({0, 0}, 1.0);
  double h = 2.0 / (n_side - 1);
  solver::Grid grid = solver::make_grid(domain, h);
  auto mask = solver::rasterize_dirichlet(grid, {}, domain, 0.5 * h);
  std::size_t n = grid.count();

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> a(n), b(n), ya(n), yb(n);
  for (auto& v : a) v = uni(rng);
  for (auto& v : b) v = uni(rng);

  std::printf("grid %dx%d (%zu nodes), threads %d\n", grid.nx, grid.ny, n,
              kernels::threads());
  std::printf("%-16s %12s %12s %8s %s\n", "kernel", "serial[ms]", "omp[ms]",
              "speedup", "bitwise");

  auto row = [&](const char* name, double ts, double tp, bool same) {
    std::printf("%-16s %12.3f %12.3f %8.2fx %s\n", name, ts * 1e3, tp * 1e3,
                ts / tp, same ? "equal" : "DIFFER");
  };

  {
    double ts = time_best(
        [&] {
          kernels::apply_laplacian_serial(a.data(), mask.free_mask.data(),
                                          grid.nx, grid.ny, h, ya.data());
        },
        reps);
    double tp = time_best(
        [&] {
          kernels::apply_laplacian_omp(a.data(), mask.free_mask.data(), grid.nx,
                                       grid.ny, h, yb.data());
        },
        reps);
    row("apply_laplacian", ts, tp, ya == yb);
  }
  {
    double rs = 0, rp = 0;
    double ts = time_best([&] { rs = kernels::dot_serial(a.data(), b.data(), n); },
                          reps);
    double tp = time_best([&] { rp = kernels::dot_omp(a.data(), b.data(), n); },
                          reps);
    row("dot", ts, tp, rs == rp);
  }
  {
    double rs = 0, rp = 0;
    double ts = time_best([&] { rs = kernels::sum_serial(a.data(), n); }, reps);
    double tp = time_best([&] { rp = kernels::sum_omp(a.data(), n); }, reps);
    row("sum", ts, tp, rs == rp);
  }
  {
    ya = b;
    yb = b;
    double ts =
        time_best([&] { kernels::axpy_serial(0.5, a.data(), ya.data(), n); }, reps);
    double tp =
        time_best([&] { kernels::axpy_omp(0.5, a.data(), yb.data(), n); }, reps);
    row("axpy", ts, tp, ya == yb);
  }
  {
    ya = b;
    yb = b;
    double ts =
        time_best([&] { kernels::xpay_serial(0.5, a.data(), ya.data(), n); }, reps);
    double tp =
        time_best([&] { kernels::xpay_omp(0.5, a.data(), yb.data(), n); }, reps);
    row("xpay", ts, tp, ya == yb);
  }
  {
    double ts = time_best(
        [&] {
          kernels::masked_scale_serial(0.5, a.data(), mask.free_mask.data(),
                                       ya.data(), n);
        },
        reps);
    double tp = time_best(
        [&] {
          kernels::masked_scale_omp(0.5, a.data(), mask.free_mask.data(),
                                    yb.data(), n);
        },
        reps);
    row("masked_scale", ts, tp, ya == yb);
  }
  return 0;
}
