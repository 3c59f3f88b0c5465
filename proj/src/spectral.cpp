#include "ricciflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "ricciflow/errors.hpp"

namespace ricci {

namespace {
// The FFTW planner is not thread-safe; executions on distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(const TorusGrid& grid)
    : grid_(grid), nkx_(grid.nx / 2 + 1) {
    const std::size_t nreal = static_cast<std::size_t>(grid_.size());
    const std::size_t ncplx = static_cast<std::size_t>(grid_.ny) * nkx_;
    real_buf_ = fftw_alloc_real(nreal);
    cplx_buf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(ncplx));
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_2d(grid_.ny, grid_.nx, real_buf_,
                                     reinterpret_cast<fftw_complex*>(cplx_buf_),
                                     FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_2d(grid_.ny, grid_.nx,
                                     reinterpret_cast<fftw_complex*>(cplx_buf_),
                                     real_buf_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw NumericalError("FFTW plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void SpectralWorkspace::forward(const double* in) {
    std::copy(in, in + grid_.size(), real_buf_);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void SpectralWorkspace::backward(double* out) {
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    const double scale = 1.0 / grid_.size();
    for (int i = 0; i < grid_.size(); ++i) out[i] = real_buf_[i] * scale;
}

double SpectralWorkspace::ksq(int i, int j) const {
    const double two_pi = 2.0 * std::numbers::pi;
    const int kx = i;  // r2c keeps 0..nx/2 in x
    const int ky = (j <= grid_.ny / 2) ? j : j - grid_.ny;
    const double ax = two_pi * kx / grid_.Lx;
    const double ay = two_pi * ky / grid_.Ly;
    return ax * ax + ay * ay;
}

void SpectralWorkspace::laplacian(const double* in, double* out) {
    forward(in);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nkx_; ++i)
            cplx_buf_[static_cast<std::size_t>(j) * nkx_ + i] *= -ksq(i, j);
    backward(out);
}

void SpectralWorkspace::inverse_laplacian(const double* rho, double* u) {
    forward(rho);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nkx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * nkx_ + i;
            const double k2 = ksq(i, j);
            if (k2 == 0.0)
                cplx_buf_[idx] = 0.0;  // zero-mean gauge
            else
                cplx_buf_[idx] /= -k2;
        }
    backward(u);
}

void SpectralWorkspace::heat_smooth(const double* in, double* out, double eps) {
    forward(in);
    const double t = eps * eps;
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nkx_; ++i)
            cplx_buf_[static_cast<std::size_t>(j) * nkx_ + i] *= std::exp(-ksq(i, j) * t);
    backward(out);
}

void SpectralWorkspace::helmholtz_inverse(const double* in, double* out, double a, double c) {
    require(a > 0.0 && c >= 0.0, "helmholtz_inverse: need a > 0, c >= 0");
    forward(in);
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nkx_; ++i)
            cplx_buf_[static_cast<std::size_t>(j) * nkx_ + i] /= (a + c * ksq(i, j));
    backward(out);
}

}  // namespace ricci
