#pragma once

#include <string>
#include <vector>

namespace ricci {

// Flat periodic background (M, h): an nx x ny cell-centered grid on a torus
// of side lengths Lx x Ly. Background curvature K_h == 0.
struct TorusGrid {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0;
    double Ly = 0.0;

    double dx() const { return Lx / nx; }
    double dy() const { return Ly / ny; }
    double cell_area() const { return dx() * dy(); }
    double area() const { return Lx * Ly; }
    int size() const { return nx * ny; }

    // Cell centers.
    double x_of(int ix) const { return (ix + 0.5) * dx(); }
    double y_of(int iy) const { return (iy + 0.5) * dy(); }

    bool operator==(const TorusGrid&) const = default;
};

TorusGrid make_grid(int nx, int ny, double Lx, double Ly);

// Real scalar function sampled at cell centers, row-major with x fastest:
// values[iy*nx + ix].
struct ScalarField {
    TorusGrid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.size()), fill) {}

    double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * grid.nx + ix]; }
    int size() const { return grid.size(); }
    double* data() { return values.data(); }
    const double* data() const { return values.data(); }

    double min() const;
    double max() const;
    bool all_finite() const;
};

enum class LaplacianKind { FivePoint, Spectral };

// Discrete Laplace-Beltrami of the flat background metric. Both variants are
// exactly mean-free: integrate(laplacian(f)) vanishes to round-off.
ScalarField laplacian(const ScalarField& f, LaplacianKind kind = LaplacianKind::FivePoint);

// cell_area * sum(values), i.e. the quadrature of f against dv_h.
double integrate(const ScalarField& f);

// Pointwise helpers used across modules.
ScalarField log_field(const ScalarField& w);          // log(max(w, 1e-300))
ScalarField exp2_field(const ScalarField& u);         // e^{2u}
ScalarField half_log_field(const ScalarField& w);     // (1/2) log w

// Serialization: JSON object {nx, ny, Lx, Ly, values} with a flat row-major
// array, and CSV with one line per grid row.
std::string field_to_json(const ScalarField& f);
ScalarField field_from_json(const std::string& text);
std::string field_to_csv(const ScalarField& f);

// Deterministic shortest-round-trip float formatting shared by all writers.
std::string format_double(double v);

}  // namespace ricci
