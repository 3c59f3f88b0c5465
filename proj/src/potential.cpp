#include "ricciflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ricciflow/approximation.hpp"
#include "ricciflow/errors.hpp"
#include "ricciflow/spectral.hpp"

namespace ricci {

namespace {
constexpr double kTotalMassTol = 1e-10;
constexpr double kExpClamp = 350.0;  // e^{2u} overflows past ~709 in the exponent
}  // namespace

void SingularSurfaceSpec::validate() const {
    require(volume > 0.0, "surface spec: volume must be positive");
    const double tot = curvature.total();
    require(std::abs(tot) <= kTotalMassTol * std::max(1.0, curvature.total_variation()),
            "surface spec: total curvature must vanish on the torus (Gauss-Bonnet)");
    for (const auto& a : curvature.atoms) {
        require(a.mass > 0.0,
                "surface spec: negative curvature atoms are not allowed; the negative "
                "part must be absolutely continuous");
        require(a.mass < 2.0 * std::numbers::pi,
                "surface spec: cusp condition violated, atom mass " +
                    format_double(a.mass) + " >= 2*pi (every atom mass must be < 2*pi)");
    }
}

SingularSurfaceSpec surface_spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const auto& g = j.at("grid");
    TorusGrid grid = make_grid(g.at("nx").get<int>(), g.at("ny").get<int>(),
                               g.at("Lx").get<double>(), g.at("Ly").get<double>());
    SingularSurfaceSpec spec;
    spec.grid = grid;
    spec.curvature = SignedMeasure(grid);
    spec.volume = j.at("volume").get<double>();
    spec.lower_bound = j.value("lower_bound", -1.0);

    double atom_sum = 0.0;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            const double x = a.at("x").get<double>();
            const double y = a.at("y").get<double>();
            const double mass = a.at("mass").get<double>();
            // snap to the nearest cell center
            int ix = static_cast<int>(std::floor(x / grid.dx()));
            int iy = static_cast<int>(std::floor(y / grid.dy()));
            ix = ((ix % grid.nx) + grid.nx) % grid.nx;
            iy = ((iy % grid.ny) + grid.ny) % grid.ny;
            spec.curvature.add_atom(ix, iy, mass);
            atom_sum += mass;
        }
    }

    const auto& dens = j.at("density");
    if (dens.is_string()) {
        require(dens.get<std::string>() == "constant_balancing",
                "surface spec: density must be \"constant_balancing\" or an array");
        const double c = -atom_sum / grid.area();
        std::fill(spec.curvature.density.values.begin(), spec.curvature.density.values.end(), c);
    } else {
        auto vals = dens.get<std::vector<double>>();
        require(vals.size() == spec.curvature.density.values.size(),
                "surface spec: density array length != nx*ny");
        spec.curvature.density.values = std::move(vals);
    }
    spec.validate();
    return spec;
}

std::string surface_spec_to_json(const SingularSurfaceSpec& spec) {
    nlohmann::json j;
    j["grid"] = {{"nx", spec.grid.nx}, {"ny", spec.grid.ny},
                 {"Lx", spec.grid.Lx}, {"Ly", spec.grid.Ly}};
    j["volume"] = spec.volume;
    j["lower_bound"] = spec.lower_bound;
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : spec.curvature.atoms)
        atoms.push_back({{"x", spec.grid.x_of(a.ix)}, {"y", spec.grid.y_of(a.iy)},
                         {"mass", a.mass}});
    j["atoms"] = atoms;
    j["density"] = spec.curvature.density.values;
    return j.dump();
}

bool check_cusp_condition(const SignedMeasure& m) {
    auto [pos, neg] = jordan_decompose(m);
    for (const auto& a : pos.atoms)
        if (!(a.mass < 2.0 * std::numbers::pi)) return false;
    return true;
}

PotentialField solve_potential(const SignedMeasure& m, double volume,
                               double mollification_scale) {
    require(volume > 0.0, "solve_potential: volume must be positive");
    require(std::abs(m.total()) <= kTotalMassTol * std::max(1.0, m.total_variation()),
            "solve_potential: measure must have zero total mass");
    require(check_cusp_condition(m),
            "solve_potential: cusp condition violated (positive atom mass >= 2*pi)");

    SignedMeasure smooth = mollify(m, mollification_scale);

    SpectralWorkspace ws(m.grid);
    PotentialField out;
    out.u = ScalarField(m.grid);
    ws.inverse_laplacian(smooth.density.data(), out.u.data());

    // Volume normalization is an additive constant in u.
    const double raw_volume = volume_of_potential(out.u);
    const double c = 0.5 * std::log(volume / raw_volume);
    for (double& v : out.u.values) v += c;

    out.measure = std::move(smooth);
    out.volume = volume;
    if (!out.u.all_finite()) throw NumericalError("solve_potential: non-finite potential");
    return out;
}

PotentialField potential_from_spec(const SingularSurfaceSpec& spec, double eps) {
    spec.validate();
    // On the torus the distributional Laplacian of u is -dw.
    return solve_potential(spec.curvature.negated(), spec.volume, eps);
}

double volume_of_potential(const ScalarField& u) {
    require(u.all_finite(), "volume_of_potential: non-finite potential");
    long double s = 0.0L;
    bool clamped = false;
    for (double v : u.values) {
        double e = 2.0 * v;
        if (e > kExpClamp) {
            e = kExpClamp;
            clamped = true;
        }
        s += std::exp(e);
    }
    if (clamped) throw NumericalError("volume_of_potential: exponent clamped, volume overflow");
    return static_cast<double>(s) * u.grid.cell_area();
}

}  // namespace ricci
