#pragma once

// Hot inner kernels of the membrane solver: masked 5-point stencil
// application, vector updates and reductions.  Every kernel exists in a
// serial reference version and an OpenMP version; results are bitwise
// identical between the two (and for every thread count) because
// reductions accumulate fixed-size blocks in a fixed order.  The bench
// tool compares the two families; the test suite checks equality.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace glueopt::kernels {

// Parallelism control.  0 = use the OpenMP default; 1 = serial
// reference path; n>1 = cap at n threads.  init_from_env reads
// GLUEOPT_THREADS.
void set_threads(int n);
int threads();
void init_from_env();
bool parallel_active();

inline constexpr std::size_t kReduceBlock = 8192;

// y[i] = free[i] ? (4 u[i] - u[W] - u[E] - u[S] - u[N]) / h^2 : 0
// Out-of-range neighbours read as 0 (the grid border is always
// constrained in practice).
void apply_laplacian_serial(const double* u, const std::uint8_t* free_mask,
                            int nx, int ny, double h, double* y);
void apply_laplacian_omp(const double* u, const std::uint8_t* free_mask,
                         int nx, int ny, double h, double* y);
void apply_laplacian(const double* u, const std::uint8_t* free_mask,
                     int nx, int ny, double h, double* y);

// Deterministic blocked reductions.
double dot_serial(const double* a, const double* b, std::size_t n);
double dot_omp(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum_serial(const double* a, std::size_t n);
double sum_omp(const double* a, std::size_t n);
double sum(const double* a, std::size_t n);

// y += s * x
void axpy_serial(double s, const double* x, double* y, std::size_t n);
void axpy_omp(double s, const double* x, double* y, std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);
// y = x + s * y
void xpay_serial(double s, const double* x, double* y, std::size_t n);
void xpay_omp(double s, const double* x, double* y, std::size_t n);
void xpay(double s, const double* x, double* y, std::size_t n);
// y[i] = free[i] ? s * x[i] : 0
void masked_scale_serial(double s, const double* x, const std::uint8_t* free_mask,
                         double* y, std::size_t n);
void masked_scale_omp(double s, const double* x, const std::uint8_t* free_mask,
                      double* y, std::size_t n);
void masked_scale(double s, const double* x, const std::uint8_t* free_mask,
                  double* y, std::size_t n);

}  // namespace glueopt::kernels
