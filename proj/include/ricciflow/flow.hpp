#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ricciflow/grid.hpp"
#include "ricciflow/metric_distance.hpp"

namespace ricci {

enum class FlowScheme { Explicit, SemiImplicit };

// One point of the flow: time and the conformal factor w = e^{2u} (> 0).
struct FlowState {
    double t = 0.0;
    ScalarField w;
};

struct FlowControls {
    double dt_initial = 1e-6;
    double dt_safety = 0.8;    // fraction of the explicit stability bound
    double dt_max = 0.0;       // 0 = unbounded
    double t_end = 0.1;
    int store_every = 10;      // used when store_dt == 0
    double store_dt = 0.0;     // > 0: steps land exactly on multiples, states
                               // stored there (shared meshes across runs)
    FlowScheme scheme = FlowScheme::Explicit;
    LaplacianKind laplacian = LaplacianKind::FivePoint;
};

struct FlowTrajectory {
    struct StepRecord {
        double t = 0.0;
        double dt = 0.0;
        double max_curvature = 0.0;
        double min_curvature = 0.0;
        double volume = 0.0;
        double min_w = 0.0;
    };

    std::vector<FlowState> states;      // time-ordered, starts at t = 0
    std::vector<StepRecord> step_log;   // one entry per accepted step (plus t = 0)
    FlowControls controls;
    bool aborted = false;
    std::string abort_reason;

    const FlowState& final_state() const { return states.back(); }
};

// One integration step of dw/dt = Laplacian(log w). Returns nullopt when the
// update loses positivity or finiteness (caller halves dt and retries).
std::optional<FlowState> step(const FlowState& s, double dt,
                              FlowScheme scheme = FlowScheme::Explicit,
                              LaplacianKind kind = LaplacianKind::FivePoint);

// Adaptive integration to t_end: dt capped by dt_safety times the explicit
// stability bound (h^2 min w / 4 on a square grid), halved on rejection,
// grown by 1.2 on success. dt underflow below 1e-12 aborts with a diagnostic
// trajectory.
FlowTrajectory run_flow(const ScalarField& w0, const FlowControls& controls);

// The w0/u0 proxies of the flow's initial data: e^{-2 t_min} w(., t_min) and
// half its log, together with the monotonicity certificate that e^{-2t} w was
// pointwise nonincreasing in t across the stored states (1e-9 slack).
std::pair<ScalarField, ScalarField> extract_initial_data(const FlowTrajectory& traj);

// Worst relative increase of e^{-2t} w across consecutive stored states
// (<= 0 when the monotone quantity is genuinely nonincreasing).
double monotone_violation(const FlowTrajectory& traj);

// Writes numbered ScalarField JSON files plus step_log.csv (columns
// t,dt,maxK,minK,vol,minw,diameter_if_sampled); diameters are filled at
// stored states when a sample set is supplied.
void export_trajectory(const FlowTrajectory& traj, const std::string& dir,
                       const SamplePointSet* samples = nullptr);

}  // namespace ricci
