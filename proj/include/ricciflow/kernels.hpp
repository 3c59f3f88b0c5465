#pragma once

#include <cstddef>

// Data-parallel inner loops. Every kernel exists twice: the OpenMP version in
// ricci::kernels (used by the library) and a plain serial reference in
// ricci::kernels::serial. The two compute identical per-cell expressions, so
// results agree bitwise; tests and the benchmark target compare them.

namespace ricci::kernels {

// 5-point periodic Laplacian: out = (f_E + f_W - 2f)/dx^2 + (f_N + f_S - 2f)/dy^2.
void laplacian_5pt(int nx, int ny, double inv_dx2, double inv_dy2,
                   const double* f, double* out);

// out[i] = log(max(f[i], 1e-300))
void log_floor(std::size_t n, const double* f, double* out);

// out[i] = exp(s * f[i])
void exp_scaled(std::size_t n, double s, const double* f, double* out);

// out[i] = x[i] + a * y[i]
void axpy(std::size_t n, double a, const double* x, const double* y, double* out);

// Helmholtz-type operator apply: y = diag .* x - c * Laplacian5(x).
void helmholtz_apply(int nx, int ny, double inv_dx2, double inv_dy2,
                     const double* diag, double c, const double* x, double* y);

double min_value(std::size_t n, const double* f);
double max_value(std::size_t n, const double* f);

namespace serial {

void laplacian_5pt(int nx, int ny, double inv_dx2, double inv_dy2,
                   const double* f, double* out);
void log_floor(std::size_t n, const double* f, double* out);
void exp_scaled(std::size_t n, double s, const double* f, double* out);
void axpy(std::size_t n, double a, const double* x, const double* y, double* out);
void helmholtz_apply(int nx, int ny, double inv_dx2, double inv_dy2,
                     const double* diag, double c, const double* x, double* y);
double min_value(std::size_t n, const double* f);
double max_value(std::size_t n, const double* f);

}  // namespace serial

}  // namespace ricci::kernels
