#include "glueopt/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef GLUEOPT_HAVE_OPENMP
#include <omp.h>
#endif

namespace glueopt::kernels {

namespace {
int g_threads = 1;  // serial unless OpenMP is available (see init)

int effective_threads() {
#ifdef GLUEOPT_HAVE_OPENMP
  if (g_threads == 0) return omp_get_max_threads();
  return g_threads;
#else
  return 1;
#endif
}
}  // namespace

void set_threads(int n) { g_threads = n < 0 ? 0 : n; }

int threads() { return effective_threads(); }

void init_from_env() {
#ifdef GLUEOPT_HAVE_OPENMP
  g_threads = 0;
#else
  g_threads = 1;
#endif
  if (const char* env = std::getenv("GLUEOPT_THREADS")) {
    try {
      set_threads(std::stoi(env));
    } catch (...) {
    }
  }
}

bool parallel_active() {
#ifdef GLUEOPT_HAVE_OPENMP
  return effective_threads() > 1;
#else
  return false;
#endif
}

// ---- stencil ----------------------------------------------------------

namespace {
inline void laplacian_row(const double* u, const std::uint8_t* free_mask, int nx,
                          int ny, double inv_h2, int j, double* y) {
  const double* row = u + (std::size_t)j * nx;
  const double* south = j > 0 ? row - nx : nullptr;
  const double* north = j + 1 < ny ? row + nx : nullptr;
  const std::uint8_t* fm = free_mask + (std::size_t)j * nx;
  double* out = y + (std::size_t)j * nx;
  for (int i = 0; i < nx; ++i) {
    if (!fm[i]) {
      out[i] = 0.0;
      continue;
    }
    double v = 4.0 * row[i];
    if (i > 0) v -= row[i - 1];
    if (i + 1 < nx) v -= row[i + 1];
    if (south) v -= south[i];
    if (north) v -= north[i];
    out[i] = v * inv_h2;
  }
}
}  // namespace

void apply_laplacian_serial(const double* u, const std::uint8_t* free_mask,
                            int nx, int ny, double h, double* y) {
  double inv_h2 = 1.0 / (h * h);
  for (int j = 0; j < ny; ++j) laplacian_row(u, free_mask, nx, ny, inv_h2, j, y);
}

void apply_laplacian_omp(const double* u, const std::uint8_t* free_mask,
                         int nx, int ny, double h, double* y) {
#ifdef GLUEOPT_HAVE_OPENMP
  double inv_h2 = 1.0 / (h * h);
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (int j = 0; j < ny; ++j) laplacian_row(u, free_mask, nx, ny, inv_h2, j, y);
#else
  apply_laplacian_serial(u, free_mask, nx, ny, h, y);
#endif
}

void apply_laplacian(const double* u, const std::uint8_t* free_mask,
                     int nx, int ny, double h, double* y) {
  if (parallel_active())
    apply_laplacian_omp(u, free_mask, nx, ny, h, y);
  else
    apply_laplacian_serial(u, free_mask, nx, ny, h, y);
}

// ---- reductions -------------------------------------------------------
//
// Both paths reduce fixed kReduceBlock-sized blocks independently and
// combine the per-block partials serially in block order, so the result
// does not depend on the thread count.

namespace {
inline double dot_block(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}
inline double sum_block(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}
inline std::size_t block_count(std::size_t n) {
  return (n + kReduceBlock - 1) / kReduceBlock;
}
}  // namespace

double dot_serial(const double* a, const double* b, std::size_t n) {
  std::size_t nb = block_count(n);
  double total = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    std::size_t off = k * kReduceBlock;
    total += dot_block(a + off, b + off, std::min(kReduceBlock, n - off));
  }
  return total;
}

double dot_omp(const double* a, const double* b, std::size_t n) {
#ifdef GLUEOPT_HAVE_OPENMP
  std::size_t nb = block_count(n);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::ptrdiff_t k = 0; k < (std::ptrdiff_t)nb; ++k) {
    std::size_t off = (std::size_t)k * kReduceBlock;
    partial[k] = dot_block(a + off, b + off, std::min(kReduceBlock, n - off));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
#else
  return dot_serial(a, b, n);
#endif
}

double dot(const double* a, const double* b, std::size_t n) {
  return parallel_active() ? dot_omp(a, b, n) : dot_serial(a, b, n);
}

double sum_serial(const double* a, std::size_t n) {
  std::size_t nb = block_count(n);
  double total = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    std::size_t off = k * kReduceBlock;
    total += sum_block(a + off, std::min(kReduceBlock, n - off));
  }
  return total;
}

double sum_omp(const double* a, std::size_t n) {
#ifdef GLUEOPT_HAVE_OPENMP
  std::size_t nb = block_count(n);
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::ptrdiff_t k = 0; k < (std::ptrdiff_t)nb; ++k) {
    std::size_t off = (std::size_t)k * kReduceBlock;
    partial[k] = sum_block(a + off, std::min(kReduceBlock, n - off));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
#else
  return sum_serial(a, n);
#endif
}

double sum(const double* a, std::size_t n) {
  return parallel_active() ? sum_omp(a, n) : sum_serial(a, n);
}

// ---- vector updates ---------------------------------------------------

void axpy_serial(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void axpy_omp(double s, const double* x, double* y, std::size_t n) {
#ifdef GLUEOPT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::ptrdiff_t i = 0; i < (std::ptrdiff_t)n; ++i) y[i] += s * x[i];
#else
  axpy_serial(s, x, y, n);
#endif
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  if (parallel_active())
    axpy_omp(s, x, y, n);
  else
    axpy_serial(s, x, y, n);
}

void xpay_serial(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + s * y[i];
}

void xpay_omp(double s, const double* x, double* y, std::size_t n) {
#ifdef GLUEOPT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::ptrdiff_t i = 0; i < (std::ptrdiff_t)n; ++i) y[i] = x[i] + s * y[i];
#else
  xpay_serial(s, x, y, n);
#endif
}

void xpay(double s, const double* x, double* y, std::size_t n) {
  if (parallel_active())
    xpay_omp(s, x, y, n);
  else
    xpay_serial(s, x, y, n);
}

void masked_scale_serial(double s, const double* x, const std::uint8_t* free_mask,
                         double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = free_mask[i] ? s * x[i] : 0.0;
}

void masked_scale_omp(double s, const double* x, const std::uint8_t* free_mask,
                      double* y, std::size_t n) {
#ifdef GLUEOPT_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
  for (std::ptrdiff_t i = 0; i < (std::ptrdiff_t)n; ++i)
    y[i] = free_mask[i] ? s * x[i] : 0.0;
#else
  masked_scale_serial(s, x, free_mask, y, n);
#endif
}

void masked_scale(double s, const double* x, const std::uint8_t* free_mask,
                  double* y, std::size_t n) {
  if (parallel_active())
    masked_scale_omp(s, x, free_mask, y, n);
  else
    masked_scale_serial(s, x, free_mask, y, n);
}

}  // namespace glueopt::kernels
