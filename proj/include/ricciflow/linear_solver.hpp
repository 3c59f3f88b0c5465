#pragma once

#include "ricciflow/grid.hpp"

namespace ricci {

// Conjugate gradients for the SPD system (diag(a) - c * Laplacian5) x = b with
// a > 0 pointwise and c >= 0, preconditioned by the constant-coefficient
// inverse (mean(a) - c * Laplacian)^{-1} applied spectrally. Deterministic:
// dot products are serial, the matvec is the shared stencil kernel.
struct CgStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

CgStats solve_shifted_laplacian(const ScalarField& a, double c, const ScalarField& b,
                                ScalarField& x, double rel_tol = 1e-12,
                                int max_iter = 2000);

}  // namespace ricci
