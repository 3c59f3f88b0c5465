#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ricciflow/grid.hpp"

namespace ricci {

// Signed measure on the grid: an absolutely continuous part (density against
// dv_h) plus a finite list of atoms pinned to cell centers. Atoms stay exact
// until mollification turns them into densities.
struct SignedMeasure {
    struct Atom {
        int ix = 0;
        int iy = 0;
        double mass = 0.0;
    };

    TorusGrid grid;
    ScalarField density;
    std::vector<Atom> atoms;

    SignedMeasure() = default;
    explicit SignedMeasure(const TorusGrid& g) : grid(g), density(g) {}

    void add_atom(int ix, int iy, double mass);  // rejects duplicate cells
    double total() const;
    double total_variation() const;
    SignedMeasure negated() const;
};

struct CurvatureReport {
    SignedMeasure measure;
    double min_density = 0.0;
    double max_atom = 0.0;
    double total = 0.0;
};

// Gauss curvature of g = w h with K_h = 0, computed through log w:
// K_g = -Laplacian(log w) / (2 w).
ScalarField gauss_curvature(const ScalarField& w,
                            LaplacianKind kind = LaplacianKind::FivePoint);

// Curvature measure of the smooth metric w h: atom-free, density K_g * w.
SignedMeasure curvature_measure(const ScalarField& w,
                                LaplacianKind kind = LaplacianKind::FivePoint);

CurvatureReport curvature_report(const ScalarField& w,
                                 LaplacianKind kind = LaplacianKind::FivePoint);

// Area measure of w h: density w, no atoms.
SignedMeasure area_measure(const ScalarField& w);

// Jordan decomposition (pos, neg): nonnegative densities, positive atom
// masses on disjoint atom sets; pos - neg recombines to the input exactly.
std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& m);

// Bounded-Lipschitz-style pseudometric for weak convergence: sup over a fixed
// 25-function dictionary (constant, 12 low Fourier modes, 12 tent bumps on a
// 4x3 sublattice, all normalized to Lipschitz constant <= 1 in the background
// metric) of |integral(phi dm1) - integral(phi dm2)|.
double weak_distance(const SignedMeasure& m1, const SignedMeasure& m2);

// The dictionary itself, exposed for tests; deterministic per grid.
std::vector<ScalarField> weak_test_dictionary(const TorusGrid& grid);

double integrate_against(const ScalarField& phi, const SignedMeasure& m);

std::string measure_to_json(const SignedMeasure& m);
SignedMeasure measure_from_json(const std::string& text);

}  // namespace ricci
