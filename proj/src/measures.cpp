#include "ricciflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ricciflow/errors.hpp"

namespace ricci {

void SignedMeasure::add_atom(int ix, int iy, double mass) {
    require(ix >= 0 && ix < grid.nx && iy >= 0 && iy < grid.ny,
            "add_atom: cell index out of range");
    for (const Atom& a : atoms)
        require(!(a.ix == ix && a.iy == iy), "add_atom: duplicate atom cell");
    atoms.push_back(Atom{ix, iy, mass});
}

double SignedMeasure::total() const {
    long double s = 0.0L;
    for (double v : density.values) s += v;
    long double t = static_cast<long double>(s) * grid.cell_area();
    for (const Atom& a : atoms) t += a.mass;
    return static_cast<double>(t);
}

double SignedMeasure::total_variation() const {
    long double s = 0.0L;
    for (double v : density.values) s += std::abs(v);
    long double t = static_cast<long double>(s) * grid.cell_area();
    for (const Atom& a : atoms) t += std::abs(a.mass);
    return static_cast<double>(t);
}

SignedMeasure SignedMeasure::negated() const {
    SignedMeasure out(grid);
    out.density = density;
    for (double& v : out.density.values) v = -v;
    out.atoms = atoms;
    for (Atom& a : out.atoms) a.mass = -a.mass;
    return out;
}

ScalarField gauss_curvature(const ScalarField& w, LaplacianKind kind) {
    require(w.all_finite(), "gauss_curvature: non-finite conformal factor");
    require(w.min() > 0.0, "gauss_curvature: conformal factor must be positive");
    ScalarField lap = laplacian(log_field(w), kind);
    ScalarField k(w.grid);
    for (int i = 0; i < w.size(); ++i) k.values[i] = -lap.values[i] / (2.0 * w.values[i]);
    return k;
}

SignedMeasure curvature_measure(const ScalarField& w, LaplacianKind kind) {
    // K_g * w = -Laplacian(log w)/2; forming it directly keeps Gauss-Bonnet
    // exact for the mean-free discrete operators.
    require(w.all_finite(), "curvature_measure: non-finite conformal factor");
    require(w.min() > 0.0, "curvature_measure: conformal factor must be positive");
    SignedMeasure m(w.grid);
    ScalarField lap = laplacian(log_field(w), kind);
    for (int i = 0; i < w.size(); ++i) m.density.values[i] = -0.5 * lap.values[i];
    return m;
}

CurvatureReport curvature_report(const ScalarField& w, LaplacianKind kind) {
    CurvatureReport r;
    r.measure = curvature_measure(w, kind);
    r.min_density = r.measure.density.min();
    r.max_atom = 0.0;
    for (const auto& a : r.measure.atoms) r.max_atom = std::max(r.max_atom, a.mass);
    r.total = r.measure.total();
    return r;
}

SignedMeasure area_measure(const ScalarField& w) {
    require(w.all_finite() && w.min() > 0.0, "area_measure: w must be positive and finite");
    SignedMeasure m(w.grid);
    m.density = w;
    return m;
}

std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& m) {
    SignedMeasure pos(m.grid), neg(m.grid);
    for (int i = 0; i < m.density.size(); ++i) {
        const double v = m.density.values[i];
        pos.density.values[i] = std::max(v, 0.0);
        neg.density.values[i] = std::max(-v, 0.0);
    }
    for (const auto& a : m.atoms) {
        if (a.mass >= 0.0)
            pos.atoms.push_back(a);
        else
            neg.atoms.push_back(SignedMeasure::Atom{a.ix, a.iy, -a.mass});
    }
    return {pos, neg};
}

double integrate_against(const ScalarField& phi, const SignedMeasure& m) {
    require(phi.grid == m.grid, "integrate_against: grid mismatch");
    long double s = 0.0L;
    for (int i = 0; i < phi.size(); ++i)
        s += static_cast<long double>(phi.values[i]) * m.density.values[i];
    long double t = s * m.grid.cell_area();
    for (const auto& a : m.atoms) t += static_cast<long double>(phi.at(a.ix, a.iy)) * a.mass;
    return static_cast<double>(t);
}

std::vector<ScalarField> weak_test_dictionary(const TorusGrid& grid) {
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<ScalarField> dict;
    dict.reserve(25);

    ScalarField one(grid, 1.0);
    dict.push_back(one);

    // 12 Fourier modes, |k| <= 2, scaled so sup|grad| = 1.
    const int modes[6][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}};
    for (const auto& k : modes) {
        const double gx = two_pi * k[0] / grid.Lx;
        const double gy = two_pi * k[1] / grid.Ly;
        const double lip = std::sqrt(gx * gx + gy * gy);
        ScalarField c(grid), s(grid);
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double ph = gx * grid.x_of(ix) + gy * grid.y_of(iy);
                c.at(ix, iy) = std::cos(ph) / lip;
                s.at(ix, iy) = std::sin(ph) / lip;
            }
        dict.push_back(std::move(c));
        dict.push_back(std::move(s));
    }

    // 12 tent bumps max(0, r0 - d_h(. , p)) on a 4x3 sublattice; the flat-torus
    // distance is 1-Lipschitz, hence so is the tent.
    const double r0 = 0.3 * std::min(grid.Lx, grid.Ly);
    for (int bj = 0; bj < 3; ++bj)
        for (int bi = 0; bi < 4; ++bi) {
            const double px = (bi + 0.5) * grid.Lx / 4.0;
            const double py = (bj + 0.5) * grid.Ly / 3.0;
            ScalarField b(grid);
            for (int iy = 0; iy < grid.ny; ++iy)
                for (int ix = 0; ix < grid.nx; ++ix) {
                    double ddx = std::abs(grid.x_of(ix) - px);
                    ddx = std::min(ddx, grid.Lx - ddx);
                    double ddy = std::abs(grid.y_of(iy) - py);
                    ddy = std::min(ddy, grid.Ly - ddy);
                    b.at(ix, iy) = std::max(0.0, r0 - std::hypot(ddx, ddy));
                }
            dict.push_back(std::move(b));
        }
    return dict;
}

double weak_distance(const SignedMeasure& m1, const SignedMeasure& m2) {
    require(m1.grid == m2.grid, "weak_distance: measures live on different grids");
    double d = 0.0;
    for (const ScalarField& phi : weak_test_dictionary(m1.grid))
        d = std::max(d, std::abs(integrate_against(phi, m1) - integrate_against(phi, m2)));
    return d;
}

std::string measure_to_json(const SignedMeasure& m) {
    nlohmann::json j;
    j["grid"] = {{"nx", m.grid.nx}, {"ny", m.grid.ny}, {"Lx", m.grid.Lx}, {"Ly", m.grid.Ly}};
    j["density"] = m.density.values;
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms) atoms.push_back({{"i", a.ix}, {"j", a.iy}, {"mass", a.mass}});
    j["atoms"] = atoms;
    return j.dump();
}

SignedMeasure measure_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const auto& g = j.at("grid");
    TorusGrid grid = make_grid(g.at("nx").get<int>(), g.at("ny").get<int>(),
                               g.at("Lx").get<double>(), g.at("Ly").get<double>());
    SignedMeasure m(grid);
    auto vals = j.at("density").get<std::vector<double>>();
    require(vals.size() == m.density.values.size(), "measure_from_json: density length");
    m.density.values = std::move(vals);
    for (const auto& a : j.at("atoms"))
        m.add_atom(a.at("i").get<int>(), a.at("j").get<int>(), a.at("mass").get<double>());
    return m;
}

}  // namespace ricci
