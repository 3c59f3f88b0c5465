// Benchmark comparing the OpenMP kernels against their serial reference.
// Also cross-checks that both lanes produce identical bits before timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ricciflow/grid.hpp"
#include "ricciflow/kernels.hpp"
#include "ricciflow/metric_distance.hpp"

using namespace ricci;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

void row(const char* name, int n, double serial, double parallel, bool bits) {
    std::printf("%-18s %5dx%-5d serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n", name,
                n, n, serial * 1e3, parallel * 1e3, serial / parallel,
                bits ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both lanes are serial\n");
#endif

    for (int n : {128, 256, 512}) {
        const std::size_t cells = static_cast<std::size_t>(n) * n;
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> d(0.5, 2.0);
        std::vector<double> w(cells), diag(cells), out_s(cells), out_p(cells);
        for (auto& v : w) v = d(rng);
        for (auto& v : diag) v = d(rng);
        const double inv_h2 = double(n) * n;
        const int reps = n <= 256 ? 40 : 10;

        double ts = best_of(reps, [&] {
            kernels::serial::laplacian_5pt(n, n, inv_h2, inv_h2, w.data(), out_s.data());
        });
        double tp = best_of(reps, [&] {
            kernels::laplacian_5pt(n, n, inv_h2, inv_h2, w.data(), out_p.data());
        });
        row("laplacian_5pt", n, ts, tp, same_bits(out_s, out_p));

        ts = best_of(reps, [&] { kernels::serial::log_floor(cells, w.data(), out_s.data()); });
        tp = best_of(reps, [&] { kernels::log_floor(cells, w.data(), out_p.data()); });
        row("log_floor", n, ts, tp, same_bits(out_s, out_p));

        ts = best_of(reps, [&] {
            kernels::serial::helmholtz_apply(n, n, inv_h2, inv_h2, diag.data(), 1e-4, w.data(),
                                             out_s.data());
        });
        tp = best_of(reps, [&] {
            kernels::helmholtz_apply(n, n, inv_h2, inv_h2, diag.data(), 1e-4, w.data(),
                                     out_p.data());
        });
        row("helmholtz_apply", n, ts, tp, same_bits(out_s, out_p));

        // one explicit flow step: log, stencil, axpy
        std::vector<double> lw(cells), lap(cells);
        ts = best_of(reps, [&] {
            kernels::serial::log_floor(cells, w.data(), lw.data());
            kernels::serial::laplacian_5pt(n, n, inv_h2, inv_h2, lw.data(), lap.data());
            kernels::serial::axpy(cells, 1e-6, w.data(), lap.data(), out_s.data());
        });
        tp = best_of(reps, [&] {
            kernels::log_floor(cells, w.data(), lw.data());
            kernels::laplacian_5pt(n, n, inv_h2, inv_h2, lw.data(), lap.data());
            kernels::axpy(cells, 1e-6, w.data(), lap.data(), out_p.data());
        });
        row("flow_step", n, ts, tp, same_bits(out_s, out_p));
    }

    // distance matrices parallelize across Dijkstra sources
    {
        const int n = 128;
        const TorusGrid g = make_grid(n, n, 1.0, 1.0);
        const SamplePointSet samples = SamplePointSet::make(g, 6);
        const ScalarField u(g, 0.0);
        const double t = best_of(3, [&] { conformal_distance(u, samples); });
        std::printf("conformal_distance %dx%d, %d sources: %.1f ms (sources run in "
                    "parallel under OpenMP)\n",
                    n, n, samples.size(), t * 1e3);
    }
    return 0;
}
