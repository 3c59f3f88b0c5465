#include "ricciflow/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ricci::kernels {

namespace {

inline double lap5_cell(int nx, int ny, double inv_dx2, double inv_dy2,
                        const double* f, int ix, int iy) {
    const int xm = (ix == 0) ? nx - 1 : ix - 1;
    const int xp = (ix == nx - 1) ? 0 : ix + 1;
    const int ym = (iy == 0) ? ny - 1 : iy - 1;
    const int yp = (iy == ny - 1) ? 0 : iy + 1;
    const double c = f[static_cast<std::size_t>(iy) * nx + ix];
    const double ex = f[static_cast<std::size_t>(iy) * nx + xp] +
                      f[static_cast<std::size_t>(iy) * nx + xm] - 2.0 * c;
    const double ey = f[static_cast<std::size_t>(yp) * nx + ix] +
                      f[static_cast<std::size_t>(ym) * nx + ix] - 2.0 * c;
    return ex * inv_dx2 + ey * inv_dy2;
}

constexpr double kLogFloor = 1e-300;

}  // namespace

void laplacian_5pt(int nx, int ny, double inv_dx2, double inv_dy2,
                   const double* f, double* out) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            out[static_cast<std::size_t>(iy) * nx + ix] =
                lap5_cell(nx, ny, inv_dx2, inv_dy2, f, ix, iy);
}

void log_floor(std::size_t n, const double* f, double* out) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[i] = std::log(std::max(f[i], kLogFloor));
}

void exp_scaled(std::size_t n, double s, const double* f, double* out) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[i] = std::exp(s * f[i]);
}

void axpy(std::size_t n, double a, const double* x, const double* y, double* out) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        out[i] = x[i] + a * y[i];
}

void helmholtz_apply(int nx, int ny, double inv_dx2, double inv_dy2,
                     const double* diag, double c, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
            y[i] = diag[i] * x[i] - c * lap5_cell(nx, ny, inv_dx2, inv_dy2, x, ix, iy);
        }
}

double min_value(std::size_t n, const double* f) {
    double m = f[0];
#pragma omp parallel for schedule(static) reduction(min : m)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        m = std::min(m, f[i]);
    return m;
}

double max_value(std::size_t n, const double* f) {
    double m = f[0];
#pragma omp parallel for schedule(static) reduction(max : m)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        m = std::max(m, f[i]);
    return m;
}

namespace serial {

void laplacian_5pt(int nx, int ny, double inv_dx2, double inv_dy2,
                   const double* f, double* out) {
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            out[static_cast<std::size_t>(iy) * nx + ix] =
                lap5_cell(nx, ny, inv_dx2, inv_dy2, f, ix, iy);
}

void log_floor(std::size_t n, const double* f, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(std::max(f[i], kLogFloor));
}

void exp_scaled(std::size_t n, double s, const double* f, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(s * f[i]);
}

void axpy(std::size_t n, double a, const double* x, const double* y, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void helmholtz_apply(int nx, int ny, double inv_dx2, double inv_dy2,
                     const double* diag, double c, const double* x, double* y) {
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
            y[i] = diag[i] * x[i] - c * lap5_cell(nx, ny, inv_dx2, inv_dy2, x, ix, iy);
        }
}

double min_value(std::size_t n, const double* f) {
    double m = f[0];
    for (std::size_t i = 1; i < n; ++i) m = std::min(m, f[i]);
    return m;
}

double max_value(std::size_t n, const double* f) {
    double m = f[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, f[i]);
    return m;
}

}  // namespace serial

}  // namespace ricci::kernels
