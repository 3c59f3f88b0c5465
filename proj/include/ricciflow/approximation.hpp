#pragma once

#include <string>
#include <vector>

#include "ricciflow/measures.hpp"
#include "ricciflow/potential.hpp"

namespace ricci {

// Turns atoms and densities into a single smooth density by convolving with
// the periodic heat kernel at time eps^2. Total mass is preserved exactly
// (the spectral zero mode is untouched). Requires eps >= max(dx, dy).
SignedMeasure mollify(const SignedMeasure& m, double eps);

// Smooth approximating family of a singular spec: one potential per epsilon,
// all at the spec's volume, with diagnostics mirroring the bounds the family
// is expected to satisfy (min curvature, volume window, diameters, and the
// Gromov-Hausdorff distortion between consecutive members).
struct MollifiedFamily {
    struct Member {
        double eps = 0.0;
        PotentialField field;
        double min_curvature = 0.0;
        double volume = 0.0;
        double diameter = 0.0;
        double gh_to_previous = 0.0;  // 0 for the first member
        bool lower_bound_ok = true;   // min K >= spec.lower_bound - 0.05
        bool volume_window_ok = true; // vol in [V/2, V] up to round-off
    };

    SingularSurfaceSpec spec;
    std::vector<Member> members;  // epsilons strictly decreasing

    std::string report_json() const;
};

MollifiedFamily build_family(const SingularSurfaceSpec& spec,
                             const std::vector<double>& epsilons,
                             int sample_lattice = 6);

}  // namespace ricci
