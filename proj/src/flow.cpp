#include "ricciflow/flow.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "ricciflow/errors.hpp"
#include "ricciflow/kernels.hpp"
#include "ricciflow/linear_solver.hpp"
#include "ricciflow/measures.hpp"

namespace ricci {

namespace {

constexpr double kDtUnderflow = 1e-12;

FlowTrajectory::StepRecord diagnostics(const FlowState& s, double dt,
                                       LaplacianKind kind) {
    FlowTrajectory::StepRecord r;
    r.t = s.t;
    r.dt = dt;
    const ScalarField k = gauss_curvature(s.w, kind);
    r.max_curvature = k.max();
    r.min_curvature = k.min();
    r.volume = integrate(s.w);
    r.min_w = s.w.min();
    return r;
}

}  // namespace

std::optional<FlowState> step(const FlowState& s, double dt, FlowScheme scheme,
                              LaplacianKind kind) {
    require(dt > 0.0, "step: dt must be positive");
    require(s.w.min() > 0.0 && s.w.all_finite(), "step: invalid flow state");

    FlowState next;
    next.t = s.t + dt;
    if (scheme == FlowScheme::Explicit) {
        const ScalarField lap = laplacian(log_field(s.w), kind);
        next.w = ScalarField(s.w.grid);
        kernels::axpy(next.w.values.size(), dt, s.w.data(), lap.data(), next.w.data());
    } else {
        // Linearized backward Euler in v = log w; the 5-point operator keeps
        // the system an M-matrix.
        ScalarField v = log_field(s.w);
        const ScalarField lap_v = laplacian(v, LaplacianKind::FivePoint);
        ScalarField rhs(s.w.grid);
        for (std::size_t i = 0; i < rhs.values.size(); ++i)
            rhs.values[i] = dt * lap_v.values[i];
        ScalarField delta(s.w.grid);
        solve_shifted_laplacian(s.w, dt, rhs, delta);
        next.w = ScalarField(s.w.grid);
        for (std::size_t i = 0; i < v.values.size(); ++i)
            next.w.values[i] = std::exp(v.values[i] + delta.values[i]);
    }

    if (!next.w.all_finite() || next.w.min() <= 0.0) return std::nullopt;
    return next;
}

FlowTrajectory run_flow(const ScalarField& w0, const FlowControls& controls) {
    require(w0.all_finite() && w0.min() > 0.0, "run_flow: w0 must be positive and finite");
    require(controls.dt_initial > 0.0, "run_flow: dt_initial must be positive");
    require(controls.t_end > 0.0, "run_flow: t_end must be positive");
    require(controls.dt_safety > 0.0 && controls.dt_safety < 1.0,
            "run_flow: dt_safety must lie in (0,1)");

    const TorusGrid& g = w0.grid;
    const double stab_coeff =
        0.5 / (1.0 / (g.dx() * g.dx()) + 1.0 / (g.dy() * g.dy()));

    FlowTrajectory traj;
    traj.controls = controls;
    FlowState state{0.0, w0};
    traj.states.push_back(state);
    traj.step_log.push_back(diagnostics(state, 0.0, controls.laplacian));

    double dt_candidate = controls.dt_initial;
    int steps_since_store = 0;
    long long next_checkpoint = 1;

    while (state.t < controls.t_end * (1.0 - 1e-15)) {
        double dt_ctrl =
            std::min(dt_candidate, controls.dt_safety * stab_coeff * state.w.min());
        if (controls.dt_max > 0.0) dt_ctrl = std::min(dt_ctrl, controls.dt_max);
        double dt = dt_ctrl;
        if (dt < kDtUnderflow) {
            traj.aborted = true;
            traj.abort_reason = "dt underflow below 1e-12 at t = " + format_double(state.t);
            break;
        }

        // Land exactly on checkpoints and on t_end.
        double target = controls.t_end;
        bool hits_target = false;
        if (controls.store_dt > 0.0) {
            const double cp = std::min(next_checkpoint * controls.store_dt, controls.t_end);
            target = cp;
        }
        if (state.t + dt >= target - 1e-15 * controls.t_end) {
            dt = target - state.t;
            hits_target = true;
        }

        std::optional<FlowState> trial = step(state, dt, controls.scheme, controls.laplacian);
        if (!trial) {
            dt_candidate = dt / 2.0;
            if (dt_candidate < kDtUnderflow) {
                traj.aborted = true;
                traj.abort_reason = "dt underflow below 1e-12 at t = " + format_double(state.t);
                break;
            }
            continue;
        }

        state = std::move(*trial);
        if (hits_target) {
            state.t = target;  // keep checkpoint times exact across runs
            if (controls.store_dt > 0.0 && target < controls.t_end) ++next_checkpoint;
        }
        traj.step_log.push_back(diagnostics(state, dt, controls.laplacian));

        bool store = false;
        if (controls.store_dt > 0.0) {
            store = hits_target;
        } else {
            ++steps_since_store;
            if (controls.store_every > 0 && steps_since_store >= controls.store_every) {
                store = true;
                steps_since_store = 0;
            }
        }
        if (store) traj.states.push_back(state);

        // grow from the controller's dt, not the checkpoint-clipped one
        dt_candidate = dt_ctrl * 1.2;
    }

    if (traj.states.back().t != state.t) traj.states.push_back(state);
    return traj;
}

double monotone_violation(const FlowTrajectory& traj) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
        const FlowState& a = traj.states[k];
        const FlowState& b = traj.states[k + 1];
        const double fa = std::exp(-2.0 * a.t);
        const double fb = std::exp(-2.0 * b.t);
        for (std::size_t i = 0; i < a.w.values.size(); ++i) {
            const double wa = fa * a.w.values[i];
            const double wb = fb * b.w.values[i];
            worst = std::max(worst, (wb - wa) / wa);
        }
    }
    return worst;
}

std::pair<ScalarField, ScalarField> extract_initial_data(const FlowTrajectory& traj) {
    require(traj.states.size() >= 3, "extract_initial_data: need at least 3 stored states");
    const double violation = monotone_violation(traj);
    if (violation > 1e-9)
        throw NumericalError("extract_initial_data: e^{-2t} w increased by relative " +
                             format_double(violation) +
                             " between stored states (scheme bug or dt too large)");
    const FlowState& first = traj.states.front();
    ScalarField w0(first.w.grid);
    const double f = std::exp(-2.0 * first.t);
    for (std::size_t i = 0; i < w0.values.size(); ++i) w0.values[i] = f * first.w.values[i];
    return {w0, half_log_field(w0)};
}

void export_trajectory(const FlowTrajectory& traj, const std::string& dir,
                       const SamplePointSet* samples) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "states");

    std::map<double, double> diameter_at;  // stored time -> diameter
    std::ostringstream index;
    index << "index,t,file\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "state_%04zu.json", i);
        std::ofstream out(fs::path(dir) / "states" / name);
        out << field_to_json(traj.states[i].w);
        index << i << ',' << format_double(traj.states[i].t) << ",states/" << name << '\n';
        if (samples) {
            const DistanceMatrix dm =
                conformal_distance(half_log_field(traj.states[i].w), *samples);
            diameter_at[traj.states[i].t] = dm.diameter();
        }
    }
    {
        std::ofstream out(fs::path(dir) / "states_index.csv");
        out << index.str();
    }

    std::ofstream log(fs::path(dir) / "step_log.csv");
    log << "t,dt,maxK,minK,vol,minw,diameter_if_sampled\n";
    for (const auto& r : traj.step_log) {
        log << format_double(r.t) << ',' << format_double(r.dt) << ','
            << format_double(r.max_curvature) << ',' << format_double(r.min_curvature) << ','
            << format_double(r.volume) << ',' << format_double(r.min_w) << ',';
        auto it = diameter_at.find(r.t);
        if (it != diameter_at.end()) log << format_double(it->second);
        log << '\n';
    }
}

}  // namespace ricci
