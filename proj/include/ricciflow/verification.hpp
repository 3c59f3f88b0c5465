#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ricciflow/flow.hpp"
#include "ricciflow/grid.hpp"
#include "ricciflow/metric_distance.hpp"
#include "ricciflow/potential.hpp"

namespace ricci {

// Empirical check of the existence estimates along one trajectory: curvature
// envelope -1 <= K <= kappa/t, diameter and volume windows, and the
// sqrt-time / exponential distance comparison on all stored pairs.
struct EstimateReport {
    double kappa_fit = 0.0;               // max over the step log of t * max(K, 0)
    bool curvature_lower_ok = true;
    double worst_curvature_violation = 0.0;  // max(0, -1 - min K)
    double diameter_ratio = 1.0;          // max over t of diam(t)/diam(t0)
    double diameter0 = 0.0;
    bool volume_window_ok = true;
    double distance_comparison_worst_slack = 0.0;  // additive, length units
    double distance_slack_fraction = 0.0;          // worst slack / diameter0
    bool distance_comparison_ok = true;

    std::string to_json() const;
};

EstimateReport check_estimates(const FlowTrajectory& traj, const SamplePointSet& samples,
                               double lower_bound_slack = 0.05,
                               double distance_slack_fraction = 0.02);

// Difference-quotient coefficient of the uniqueness argument:
// A = (log w2 - log w1)/(w2 - w1), with the limit branch 2/(w1 + w2) where the
// inputs nearly coincide. Pinned pointwise to [min(1/w1,1/w2), max(1/w1,1/w2)].
ScalarField coefficient_A(const ScalarField& w1, const ScalarField& w2);

// Piecewise-constant-in-time coefficient on a stored mesh: a[k] applies on
// [times[k], times[k+1]].
struct CoefficientTrack {
    std::vector<double> times;
    std::vector<ScalarField> a;
};

struct BackwardSolution {
    std::vector<double> times;       // ascending, from s to Tprime
    std::vector<ScalarField> psi;    // psi at those times
};

// Integrates d psi/dt = -A(x,t) Laplacian(psi) backwards from Tprime to s,
// one backward-Euler (in reversed time) solve per stored interval. The
// 5-point system is an M-matrix, so the discrete maximum principle
// 0 <= psi <= sup eta holds up to solver tolerance; a breach beyond
// 1e-6 * sup eta is an error.
BackwardSolution backward_heat_solve(const CoefficientTrack& track, const ScalarField& eta,
                                     double s, double t_prime);

// |integral((w2 - w1)(T') eta) - integral((w2 - w1)(s) psi(s))| for two flows
// sharing grid and stored time mesh.
double duality_residual(const FlowTrajectory& traj1, const FlowTrajectory& traj2,
                        const ScalarField& eta, double s, double t_prime);

double l1_difference(const ScalarField& w1, const ScalarField& w2);

// Default test function: 1 + cos(2 pi x / Lx) cos(2 pi y / Ly) / 2.
ScalarField default_eta(const TorusGrid& grid);

// Headline experiment: flows from pairs of mollifications of one spec, with
// the L1 gap, the sampled uniform distance, and the duality residual recorded
// along shared stored meshes.
struct UniquenessReport {
    struct CurvePoint {
        double eps1 = 0.0, eps2 = 0.0, t = 0.0, l1 = 0.0;
        double ud = std::numeric_limits<double>::quiet_NaN();  // NaN = not sampled
    };
    struct DualityPoint {
        double eps1 = 0.0, eps2 = 0.0, s = 0.0, t_prime = 0.0;
        double residual = 0.0;
        double l1_ref = 0.0;  // L1 gap at t_prime
    };

    std::vector<CurvePoint> curves;
    std::vector<DualityPoint> duality;
    // monotone certificate (worst relative increase of e^{-2t} w) per flow
    std::vector<std::pair<double, double>> flow_monotone;  // (eps, violation)

    std::string to_json() const;
    std::string curves_to_csv() const;
};

UniquenessReport uniqueness_experiment(const SingularSurfaceSpec& spec,
                                       const std::vector<std::pair<double, double>>& eps_pairs,
                                       const FlowControls& controls,
                                       const SamplePointSet& samples,
                                       int distance_stride = 1);

}  // namespace ricci
