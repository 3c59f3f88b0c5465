#include "ricciflow/linear_solver.hpp"

#include <cmath>

#include "ricciflow/errors.hpp"
#include "ricciflow/kernels.hpp"
#include "ricciflow/spectral.hpp"

namespace ricci {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += static_cast<long double>(x[i]) * y[i];
    return static_cast<double>(s);
}

}  // namespace

CgStats solve_shifted_laplacian(const ScalarField& a, double c, const ScalarField& b,
                                ScalarField& x, double rel_tol, int max_iter) {
    require(a.grid == b.grid, "solve_shifted_laplacian: grid mismatch");
    require(a.min() > 0.0 && c >= 0.0, "solve_shifted_laplacian: need a > 0, c >= 0");

    const TorusGrid& g = a.grid;
    const double inv_dx2 = 1.0 / (g.dx() * g.dx());
    const double inv_dy2 = 1.0 / (g.dy() * g.dy());
    const std::size_t n = static_cast<std::size_t>(g.size());

    SpectralWorkspace ws(g);
    const double a_mean = integrate(a) / g.area();

    if (!(x.grid == g)) x = ScalarField(g);

    ScalarField r(g), z(g), p(g), ap(g);
    kernels::helmholtz_apply(g.nx, g.ny, inv_dx2, inv_dy2, a.data(), c, x.data(), ap.data());
    for (std::size_t i = 0; i < n; ++i) r.values[i] = b.values[i] - ap.values[i];

    const double bnorm = std::sqrt(dot(b.values, b.values));
    CgStats stats;
    if (bnorm == 0.0) {
        x = ScalarField(g);
        return stats;
    }

    ws.helmholtz_inverse(r.data(), z.data(), a_mean, c);
    p = z;
    double rz = dot(r.values, z.values);

    for (int it = 0; it < max_iter; ++it) {
        const double rnorm = std::sqrt(dot(r.values, r.values));
        stats.relative_residual = rnorm / bnorm;
        stats.iterations = it;
        if (stats.relative_residual <= rel_tol) return stats;

        kernels::helmholtz_apply(g.nx, g.ny, inv_dx2, inv_dy2, a.data(), c, p.data(), ap.data());
        const double alpha = rz / dot(p.values, ap.values);
        for (std::size_t i = 0; i < n; ++i) {
            x.values[i] += alpha * p.values[i];
            r.values[i] -= alpha * ap.values[i];
        }
        ws.helmholtz_inverse(r.data(), z.data(), a_mean, c);
        const double rz_new = dot(r.values, z.values);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p.values[i] = z.values[i] + beta * p.values[i];
    }
    throw NumericalError("solve_shifted_laplacian: CG failed to converge, residual " +
                         format_double(stats.relative_residual));
}

}  // namespace ricci
