#pragma once

#include <string>
#include <vector>

#include "ricciflow/grid.hpp"

namespace ricci {

// Fixed deterministic set of cell indices on which distance matrices are
// sampled: a k x k sublattice plus the four quarter-lattice corners.
struct SamplePointSet {
    struct Point {
        int ix = 0;
        int iy = 0;
    };

    TorusGrid grid;
    std::vector<Point> points;

    static SamplePointSet make(const TorusGrid& grid, int k = 6);
    int size() const { return static_cast<int>(points.size()); }
    bool operator==(const SamplePointSet& other) const;
};

// Pairwise conformal geodesic distances between the sample points, computed
// by Dijkstra on the periodic grid graph. The stencil has 16 edge directions
// modulo sign (axis, diagonal, (2,1)- and (3,1)/(3,2)-type moves), which caps
// the flat-case anisotropic overestimate near 1.3%. Edge weight is the
// background edge length times the mean of the endpoint conformal factors
// e^u.
struct DistanceMatrix {
    SamplePointSet samples;
    std::vector<double> d;  // n*n, symmetric, zero diagonal

    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * samples.size() + j]; }
    double diameter() const;
};

DistanceMatrix conformal_distance(const ScalarField& u, const SamplePointSet& samples);

// sup over sample pairs of |d1 - d2|.
double uniform_distance(const DistanceMatrix& d1, const DistanceMatrix& d2);

// Half the distortion of the identity correspondence on the shared sample
// set; an upper bound for the sampled Gromov-Hausdorff distance.
double gh_distortion(const DistanceMatrix& d1, const DistanceMatrix& d2);

std::string distance_matrix_to_csv(const DistanceMatrix& m);
std::string distance_matrix_to_json(const DistanceMatrix& m);

}  // namespace ricci
