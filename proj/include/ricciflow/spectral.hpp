#pragma once

#include <complex>
#include <vector>

#include "ricciflow/grid.hpp"

namespace ricci {

// Fourier-side operations on a fixed grid: exact Laplacian on band-limited
// data, the zero-mean inverse Laplacian used by the potential solver, the
// periodic heat-kernel smoother behind mollification, and the inverse of the
// constant-coefficient Helmholtz operator (CG preconditioner).
//
// All plans use FFTW_ESTIMATE so results are reproducible run to run.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const TorusGrid& grid);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const TorusGrid& grid() const { return grid_; }

    // out = Laplacian(in), multiplier -|k|^2 with the continuum wavevector.
    void laplacian(const double* in, double* out);

    // Solves Laplacian(u) = rho - mean(rho) with the zero-mean gauge.
    void inverse_laplacian(const double* rho, double* u);

    // Convolution with the periodic heat kernel at time eps^2
    // (multiplier exp(-|k|^2 eps^2)); the k = 0 mode is untouched, so total
    // mass is preserved exactly.
    void heat_smooth(const double* in, double* out, double eps);

    // out = (a - c*Laplacian)^{-1} in, for constants a > 0, c >= 0.
    void helmholtz_inverse(const double* in, double* out, double a, double c);

private:
    void forward(const double* in);
    void backward(double* out);
    double ksq(int i, int j) const;  // |k|^2 for r2c bin (i, j)

    TorusGrid grid_;
    int nkx_;  // nx/2 + 1
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    double* real_buf_ = nullptr;
    std::complex<double>* cplx_buf_ = nullptr;
};

}  // namespace ricci
