#pragma once

#include <string>

#include "ricciflow/measures.hpp"

namespace ricci {

// Declarative description of a singular initial surface: target curvature
// measure dw (positive atoms, absolutely continuous negative part), target
// conformal volume V, and the curvature lower bound the surface is supposed
// to satisfy.
struct SingularSurfaceSpec {
    TorusGrid grid;
    SignedMeasure curvature;   // the target curvature measure
    double volume = 1.0;       // V = integral of e^{2u} dv_h
    double lower_bound = -1.0; // curvature bounded below by this

    // Zero total mass, all atoms in (0, 2*pi), volume > 0.
    void validate() const;
};

// Input file format: JSON {grid, volume, lower_bound, atoms:[{x,y,mass}],
// density: "constant_balancing" | [array]}. Atom coordinates are in length
// units and snap to the nearest cell center.
SingularSurfaceSpec surface_spec_from_json(const std::string& text);
std::string surface_spec_to_json(const SingularSurfaceSpec& spec);

// Potential of a zero-mass measure at fixed volume. The stored measure is the
// mollified distributional Laplacian of u (atom-free).
struct PotentialField {
    ScalarField u;
    SignedMeasure measure;
    double volume = 0.0;
};

// True iff every positive atom of m has mass < 2*pi.
bool check_cusp_condition(const SignedMeasure& m);

// Solves Laplacian_h(u) = density-of(mollify(m, mollification_scale)) with the
// zero-mean spectral inverse, then shifts u by the closed-form constant so
// that integral(e^{2u}) = V.
//
// Sign convention (fixed by the smooth round-trip test): the measure passed in
// is the distributional Laplacian of u itself. For a surface with curvature
// measure dw on the torus that is mu = -dw, so builders pass spec.curvature
// negated; see potential_from_spec.
PotentialField solve_potential(const SignedMeasure& m, double volume,
                               double mollification_scale);

// Convenience pipeline: mollify the spec's curvature measure at scale eps,
// negate, solve, normalize to spec.volume.
PotentialField potential_from_spec(const SingularSurfaceSpec& spec, double eps);

// integral(e^{2u}) with an overflow guard.
double volume_of_potential(const ScalarField& u);

}  // namespace ricci
