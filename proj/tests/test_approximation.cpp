#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ricciflow/approximation.hpp"
#include "ricciflow/errors.hpp"
#include "ricciflow/measures.hpp"

using namespace ricci;

namespace {
const double kPi = std::numbers::pi;

SingularSurfaceSpec one_cone(int n, double V) {
    TorusGrid g = make_grid(n, n, 1.0, 1.0);
    SingularSurfaceSpec spec;
    spec.grid = g;
    spec.curvature = SignedMeasure(g);
    spec.curvature.add_atom(n / 2, n / 2, kPi);
    for (double& v : spec.curvature.density.values) v = -kPi;
    spec.volume = V;
    return spec;
}
}  // namespace

TEST_CASE("mollify: zero measure, mass conservation, under-resolution guard") {
    const TorusGrid g = make_grid(32, 32, 1.0, 1.0);

    const SignedMeasure zero = mollify(SignedMeasure(g), 4.0 * g.dx());
    CHECK(std::abs(zero.density.max()) < 1e-14);
    CHECK(zero.atoms.empty());

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SignedMeasure m(g);
    for (double& v : m.density.values) v = d(rng);
    m.add_atom(5, 7, 2.5);
    m.add_atom(20, 11, -0.75);
    const SignedMeasure smooth = mollify(m, 2.0 * g.dx());
    CHECK(smooth.atoms.empty());
    CHECK(smooth.total() == doctest::Approx(m.total()).epsilon(1e-13));

    CHECK_THROWS_AS(mollify(m, 0.5 * g.dx()), ValidationError);
}

TEST_CASE("mollified atom is a periodic Gaussian bump of the right mass") {
    const int n = 64;
    const TorusGrid g = make_grid(n, n, 1.0, 1.0);
    SignedMeasure m(g);
    m.add_atom(32, 32, kPi);
    const double eps = 4.0 / n;
    const SignedMeasure smooth = mollify(m, eps);

    CHECK(smooth.total() == doctest::Approx(kPi).epsilon(1e-13));

    // peak at the atom cell, matching the free Gaussian peak mass/(4 pi eps^2)
    double peak = 0.0;
    int peak_i = -1;
    for (int i = 0; i < g.size(); ++i)
        if (smooth.density.values[i] > peak) {
            peak = smooth.density.values[i];
            peak_i = i;
        }
    CHECK(peak_i == 32 * n + 32);
    CHECK(peak == doctest::Approx(kPi / (4.0 * kPi * eps * eps)).epsilon(0.01));

    // radially decreasing along the axis through the atom
    for (int k = 1; k < 8; ++k)
        CHECK(smooth.density.at(32 + k, 32) < smooth.density.at(32 + k - 1, 32));
}

TEST_CASE("weak distance to the unmollified measure roughly halves with eps") {
    const int n = 64;
    const TorusGrid g = make_grid(n, n, 1.0, 1.0);
    SignedMeasure m(g);
    m.add_atom(20, 20, 1.5 * kPi);
    m.add_atom(44, 44, 0.5 * kPi);

    const double d8 = weak_distance(mollify(m, 8.0 / n), m);
    const double d4 = weak_distance(mollify(m, 4.0 / n), m);
    const double d2 = weak_distance(mollify(m, 2.0 / n), m);
    CHECK(d4 / d8 == doctest::Approx(0.5).epsilon(0.35));
    CHECK(d2 / d4 == doctest::Approx(0.5).epsilon(0.35));
}

TEST_CASE("flat spec builds a constant family") {
    const int n = 32;
    TorusGrid g = make_grid(n, n, 1.0, 1.0);
    SingularSurfaceSpec spec;
    spec.grid = g;
    spec.curvature = SignedMeasure(g);
    spec.volume = 2.0;
    const MollifiedFamily fam = build_family(spec, {8.0 / n, 4.0 / n, 2.0 / n});
    REQUIRE(fam.members.size() == 3);
    for (const auto& mem : fam.members) {
        CHECK(std::abs(mem.min_curvature) < 1e-9);
        CHECK(mem.volume == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(mem.gh_to_previous < 1e-12);
        CHECK(mem.lower_bound_ok);
        const double spread = exp2_field(mem.field.u).max() - exp2_field(mem.field.u).min();
        CHECK(spread < 1e-12);
    }
}

TEST_CASE("one-cone family diagnostics") {
    const int n = 64;
    const SingularSurfaceSpec spec = one_cone(n, 8.0);
    const MollifiedFamily fam = build_family(spec, {8.0 / n, 4.0 / n, 2.0 / n});
    REQUIRE(fam.members.size() == 3);

    for (const auto& mem : fam.members) {
        // volume normalization is exact up to round-off
        CHECK(mem.volume == doctest::Approx(8.0).epsilon(1e-12));
        // mollification preserved zero total curvature
        CHECK(std::abs(mem.field.measure.total()) <=
              1e-10 * mem.field.measure.total_variation());
        // smooth negative part: min K >= -mass/(area * min w) up to tolerance
        const ScalarField w = exp2_field(mem.field.u);
        CHECK(mem.min_curvature >= -kPi / (spec.grid.area() * w.min()) - 0.02);
        CHECK(mem.lower_bound_ok);
        CHECK(mem.volume_window_ok);
    }

    // diameters of consecutive members stay within 5%
    for (std::size_t i = 1; i < fam.members.size(); ++i) {
        const double r = fam.members[i].diameter / fam.members[i - 1].diameter;
        CHECK(r > 0.95);
        CHECK(r < 1.05);
    }

    // the family report is valid JSON with one entry per member
    const std::string rep = fam.report_json();
    CHECK(rep.find("\"members\"") != std::string::npos);
    CHECK(rep.find("\"gh_to_previous\"") != std::string::npos);
}

// GH-convergence proxy at 128^2, where the 2h member is well resolved: the
// distortion between consecutive members decreases as eps drops.
TEST_CASE("gh distortion decreases down the epsilon ladder") {
    const int n = 128;
    const SingularSurfaceSpec spec = one_cone(n, 8.0);
    const MollifiedFamily fam = build_family(spec, {8.0 / n, 4.0 / n, 2.0 / n});
    REQUIRE(fam.members.size() == 3);
    CHECK(fam.members[2].gh_to_previous < fam.members[1].gh_to_previous);
    // measured drop is about 2.5x; assert a conservative strict decrease
    CHECK(fam.members[2].gh_to_previous < 0.75 * fam.members[1].gh_to_previous);
}

TEST_CASE("build_family validates the ladder") {
    const SingularSurfaceSpec spec = one_cone(32, 4.0);
    CHECK_THROWS_AS(build_family(spec, {}), ValidationError);
    CHECK_THROWS_AS(build_family(spec, {0.125, 0.125}), ValidationError);
}
