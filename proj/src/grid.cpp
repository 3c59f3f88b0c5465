#include "ricciflow/grid.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ricciflow/errors.hpp"
#include "ricciflow/kernels.hpp"
#include "ricciflow/spectral.hpp"

namespace ricci {

TorusGrid make_grid(int nx, int ny, double Lx, double Ly) {
    require(nx >= 8 && ny >= 8, "make_grid: nx, ny must be >= 8");
    require(Lx > 0.0 && Ly > 0.0, "make_grid: Lx, Ly must be positive");
    require(std::isfinite(Lx) && std::isfinite(Ly), "make_grid: non-finite side length");
    return TorusGrid{nx, ny, Lx, Ly};
}

double ScalarField::min() const { return kernels::min_value(values.size(), values.data()); }
double ScalarField::max() const { return kernels::max_value(values.size(), values.data()); }

bool ScalarField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

ScalarField laplacian(const ScalarField& f, LaplacianKind kind) {
    require(f.all_finite(), "laplacian: input field has non-finite values");
    ScalarField out(f.grid);
    if (kind == LaplacianKind::FivePoint) {
        const double inv_dx2 = 1.0 / (f.grid.dx() * f.grid.dx());
        const double inv_dy2 = 1.0 / (f.grid.dy() * f.grid.dy());
        kernels::laplacian_5pt(f.grid.nx, f.grid.ny, inv_dx2, inv_dy2, f.data(), out.data());
    } else {
        SpectralWorkspace ws(f.grid);
        ws.laplacian(f.data(), out.data());
    }
    return out;
}

double integrate(const ScalarField& f) {
    long double s = 0.0L;
    for (double v : f.values) s += v;
    return static_cast<double>(s) * f.grid.cell_area();
}

ScalarField log_field(const ScalarField& w) {
    ScalarField out(w.grid);
    kernels::log_floor(w.values.size(), w.data(), out.data());
    return out;
}

ScalarField exp2_field(const ScalarField& u) {
    ScalarField out(u.grid);
    kernels::exp_scaled(u.values.size(), 2.0, u.data(), out.data());
    return out;
}

ScalarField half_log_field(const ScalarField& w) {
    ScalarField out = log_field(w);
    for (double& v : out.values) v *= 0.5;
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string field_to_json(const ScalarField& f) {
    nlohmann::json j;
    j["nx"] = f.grid.nx;
    j["ny"] = f.grid.ny;
    j["Lx"] = f.grid.Lx;
    j["Ly"] = f.grid.Ly;
    j["values"] = f.values;
    return j.dump();
}

ScalarField field_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TorusGrid g = make_grid(j.at("nx").get<int>(), j.at("ny").get<int>(),
                            j.at("Lx").get<double>(), j.at("Ly").get<double>());
    ScalarField f(g);
    auto vals = j.at("values").get<std::vector<double>>();
    require(vals.size() == f.values.size(), "field_from_json: values length != nx*ny");
    f.values = std::move(vals);
    return f;
}

std::string field_to_csv(const ScalarField& f) {
    std::ostringstream out;
    for (int iy = 0; iy < f.grid.ny; ++iy) {
        for (int ix = 0; ix < f.grid.nx; ++ix) {
            if (ix) out << ',';
            out << format_double(f.at(ix, iy));
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ricci
