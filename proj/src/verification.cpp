#include "ricciflow/verification.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ricciflow/errors.hpp"
#include "ricciflow/linear_solver.hpp"
#include "ricciflow/measures.hpp"

namespace ricci {

EstimateReport check_estimates(const FlowTrajectory& traj, const SamplePointSet& samples,
                               double lower_bound_slack, double distance_slack_fraction) {
    require(traj.states.size() >= 5, "check_estimates: need at least 5 stored states");
    EstimateReport rep;

    for (const auto& r : traj.step_log) {
        rep.kappa_fit = std::max(rep.kappa_fit, r.t * std::max(r.max_curvature, 0.0));
        rep.worst_curvature_violation =
            std::max(rep.worst_curvature_violation, -1.0 - r.min_curvature);
    }
    rep.worst_curvature_violation = std::max(rep.worst_curvature_violation, 0.0);
    rep.curvature_lower_ok = rep.worst_curvature_violation <= lower_bound_slack;

    const double vol0 = traj.step_log.front().volume;
    rep.volume_window_ok = true;
    for (const auto& r : traj.step_log)
        if (r.volume < 0.25 * vol0 * (1.0 - 1e-9) || r.volume > 2.0 * vol0 * (1.0 + 1e-9))
            rep.volume_window_ok = false;

    std::vector<DistanceMatrix> mats;
    mats.reserve(traj.states.size());
    for (const auto& s : traj.states)
        mats.push_back(conformal_distance(half_log_field(s.w), samples));

    rep.diameter0 = mats.front().diameter();
    for (const auto& m : mats)
        rep.diameter_ratio = std::max(rep.diameter_ratio, m.diameter() / rep.diameter0);

    // d(s) - kappa (sqrt(t) - sqrt(s)) <= d(t) <= e^{kappa (t-s)} d(s) on all
    // stored pairs, reported as the worst additive slack needed.
    double worst = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const double ts = traj.states[i].t;
            const double tt = traj.states[j].t;
            const double drop = rep.kappa_fit * (std::sqrt(tt) - std::sqrt(ts));
            const double grow = std::exp(rep.kappa_fit * (tt - ts));
            for (std::size_t e = 0; e < mats[i].d.size(); ++e) {
                const double ds = mats[i].d[e];
                const double dt = mats[j].d[e];
                worst = std::max(worst, (ds - drop) - dt);
                worst = std::max(worst, dt - grow * ds);
            }
        }
    rep.distance_comparison_worst_slack = worst;
    rep.distance_slack_fraction = (rep.diameter0 > 0.0) ? worst / rep.diameter0 : 0.0;
    rep.distance_comparison_ok = rep.distance_slack_fraction <= distance_slack_fraction;
    return rep;
}

std::string EstimateReport::to_json() const {
    nlohmann::json j;
    j["kappa_fit"] = kappa_fit;
    j["curvature_lower_ok"] = curvature_lower_ok;
    j["worst_curvature_violation"] = worst_curvature_violation;
    j["diameter_ratio"] = diameter_ratio;
    j["diameter0"] = diameter0;
    j["volume_window_ok"] = volume_window_ok;
    j["distance_comparison_worst_slack"] = distance_comparison_worst_slack;
    j["distance_slack_fraction"] = distance_slack_fraction;
    j["distance_comparison_ok"] = distance_comparison_ok;
    return j.dump(2);
}

ScalarField coefficient_A(const ScalarField& w1, const ScalarField& w2) {
    require(w1.grid == w2.grid, "coefficient_A: grid mismatch");
    require(w1.min() > 0.0 && w2.min() > 0.0, "coefficient_A: inputs must be positive");
    ScalarField a(w1.grid);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double x = w1.values[i];
        const double y = w2.values[i];
        double v;
        if (std::abs(y - x) < 1e-8 * std::max(x, y))
            v = 2.0 / (x + y);  // limit branch
        else
            v = (std::log(y) - std::log(x)) / (y - x);
        // mean-value bracket, held exactly against round-off
        const double lo = std::min(1.0 / x, 1.0 / y);
        const double hi = std::max(1.0 / x, 1.0 / y);
        a.values[i] = std::clamp(v, lo, hi);
    }
    return a;
}

BackwardSolution backward_heat_solve(const CoefficientTrack& track, const ScalarField& eta,
                                     double s, double t_prime) {
    require(track.times.size() >= 2, "backward_heat_solve: need at least two mesh times");
    require(track.a.size() + 1 == track.times.size(),
            "backward_heat_solve: need one coefficient field per interval");
    require(eta.all_finite(), "backward_heat_solve: non-finite terminal data");
    require(eta.min() >= 0.0, "backward_heat_solve: eta must be nonnegative");
    require(s < t_prime, "backward_heat_solve: need s < Tprime");

    auto find_index = [&](double t) {
        for (std::size_t k = 0; k < track.times.size(); ++k)
            if (std::abs(track.times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
                return static_cast<int>(k);
        throw ValidationError("backward_heat_solve: time " + format_double(t) +
                              " is not on the stored mesh");
    };
    const int is = find_index(s);
    const int it = find_index(t_prime);
    require(is < it, "backward_heat_solve: empty time range");

    const double sup_eta = eta.max();
    const double tol = 1e-6 * sup_eta;

    BackwardSolution sol;
    sol.times.assign(track.times.begin() + is, track.times.begin() + it + 1);
    sol.psi.resize(sol.times.size());
    sol.psi.back() = eta;

    ScalarField psi = eta;
    for (int k = it - 1; k >= is; --k) {
        const double dt = track.times[k + 1] - track.times[k];
        const ScalarField& a = track.a[k];
        require(a.grid == eta.grid, "backward_heat_solve: coefficient grid mismatch");
        // (I - dt diag(A) Lap) psi_k = psi_{k+1}; symmetrized by 1/A.
        ScalarField inv_a(a.grid), rhs(a.grid);
        for (std::size_t i = 0; i < inv_a.values.size(); ++i) {
            inv_a.values[i] = 1.0 / a.values[i];
            rhs.values[i] = psi.values[i] * inv_a.values[i];
        }
        ScalarField next = psi;  // warm start
        solve_shifted_laplacian(inv_a, dt, rhs, next, 1e-13, 5000);
        psi = std::move(next);

        const double lo = psi.min();
        const double hi = psi.max();
        if (lo < -tol || hi > sup_eta + tol)
            throw NumericalError("backward_heat_solve: maximum principle breached, psi in [" +
                                 format_double(lo) + ", " + format_double(hi) + "]");
        sol.psi[static_cast<std::size_t>(k - is)] = psi;
    }
    return sol;
}

double l1_difference(const ScalarField& w1, const ScalarField& w2) {
    require(w1.grid == w2.grid, "l1_difference: grid mismatch");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < w1.values.size(); ++i)
        sum += std::abs(w1.values[i] - w2.values[i]);
    return static_cast<double>(sum) * w1.grid.cell_area();
}

ScalarField default_eta(const TorusGrid& grid) {
    const double two_pi = 2.0 * std::numbers::pi;
    ScalarField eta(grid);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            eta.at(ix, iy) = 1.0 + 0.5 * std::cos(two_pi * grid.x_of(ix) / grid.Lx) *
                                       std::cos(two_pi * grid.y_of(iy) / grid.Ly);
    return eta;
}

namespace {

void require_shared_mesh(const FlowTrajectory& t1, const FlowTrajectory& t2) {
    require(t1.states.size() == t2.states.size(),
            "duality_residual: trajectories store different state counts");
    for (std::size_t k = 0; k < t1.states.size(); ++k) {
        require(t1.states[k].w.grid == t2.states[k].w.grid,
                "duality_residual: trajectories live on different grids");
        require(std::abs(t1.states[k].t - t2.states[k].t) <= 1e-12,
                "duality_residual: stored time meshes differ");
    }
}

double integral_product(const ScalarField& f, const ScalarField& g_, const ScalarField& h) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        sum += (static_cast<long double>(f.values[i]) - g_.values[i]) * h.values[i];
    return static_cast<double>(sum) * f.grid.cell_area();
}

}  // namespace

double duality_residual(const FlowTrajectory& traj1, const FlowTrajectory& traj2,
                        const ScalarField& eta, double s, double t_prime) {
    require_shared_mesh(traj1, traj2);

    CoefficientTrack track;
    for (const auto& st : traj1.states) track.times.push_back(st.t);
    for (std::size_t k = 0; k + 1 < traj1.states.size(); ++k)
        track.a.push_back(coefficient_A(traj1.states[k].w, traj2.states[k].w));

    const BackwardSolution sol = backward_heat_solve(track, eta, s, t_prime);

    auto state_at = [&](const FlowTrajectory& tr, double t) -> const ScalarField& {
        for (const auto& st : tr.states)
            if (std::abs(st.t - t) <= 1e-12) return st.w;
        throw ValidationError("duality_residual: time not stored");
    };

    const double lhs = integral_product(state_at(traj2, t_prime), state_at(traj1, t_prime), eta);
    const double rhs =
        integral_product(state_at(traj2, s), state_at(traj1, s), sol.psi.front());
    return std::abs(lhs - rhs);
}

UniquenessReport uniqueness_experiment(const SingularSurfaceSpec& spec,
                                       const std::vector<std::pair<double, double>>& eps_pairs,
                                       const FlowControls& controls,
                                       const SamplePointSet& samples,
                                       int distance_stride) {
    spec.validate();
    require(!eps_pairs.empty(), "uniqueness_experiment: no epsilon pairs");
    FlowControls ctl = controls;
    if (ctl.store_dt <= 0.0) ctl.store_dt = ctl.t_end / 10.0;  // shared meshes

    // One flow per distinct epsilon.
    std::map<double, FlowTrajectory> flows;
    std::map<double, std::map<std::size_t, DistanceMatrix>> matrices;
    for (const auto& [e1, e2] : eps_pairs) {
        for (double e : {e1, e2})
            if (!flows.count(e)) {
                const PotentialField p = potential_from_spec(spec, e);
                flows.emplace(e, run_flow(exp2_field(p.u), ctl));
                if (flows.at(e).aborted)
                    throw NumericalError("uniqueness_experiment: flow aborted at eps = " +
                                         format_double(e) + " (" +
                                         flows.at(e).abort_reason + ")");
            }
    }

    auto matrix_for = [&](double eps, std::size_t idx) -> const DistanceMatrix& {
        auto& cache = matrices[eps];
        auto it = cache.find(idx);
        if (it == cache.end())
            it = cache.emplace(idx, conformal_distance(
                                          half_log_field(flows.at(eps).states[idx].w), samples))
                     .first;
        return it->second;
    };

    UniquenessReport rep;
    for (const auto& [e, traj] : flows)
        rep.flow_monotone.emplace_back(e, monotone_violation(traj));
    const ScalarField eta = default_eta(spec.grid);
    for (const auto& [e1, e2] : eps_pairs) {
        const FlowTrajectory& f1 = flows.at(e1);
        const FlowTrajectory& f2 = flows.at(e2);
        for (std::size_t k = 0; k < f1.states.size(); ++k) {
            UniquenessReport::CurvePoint pt;
            pt.eps1 = e1;
            pt.eps2 = e2;
            pt.t = f1.states[k].t;
            pt.l1 = l1_difference(f1.states[k].w, f2.states[k].w);
            const bool sampled = (distance_stride > 0) &&
                                 (k % static_cast<std::size_t>(distance_stride) == 0 ||
                                  k + 1 == f1.states.size());
            if (sampled) pt.ud = uniform_distance(matrix_for(e1, k), matrix_for(e2, k));
            rep.curves.push_back(pt);
        }

        UniquenessReport::DualityPoint dp;
        dp.eps1 = e1;
        dp.eps2 = e2;
        dp.s = f1.states[1].t;  // first stored time after 0
        dp.t_prime = f1.states.back().t;
        dp.residual = duality_residual(f1, f2, eta, dp.s, dp.t_prime);
        dp.l1_ref = l1_difference(f1.states.back().w, f2.states.back().w);
        rep.duality.push_back(dp);
    }
    return rep;
}

std::string UniquenessReport::to_json() const {
    nlohmann::json j;
    nlohmann::json curves_json = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json e = {{"eps1", c.eps1}, {"eps2", c.eps2}, {"t", c.t}, {"l1", c.l1}};
        if (!std::isnan(c.ud)) e["uniform_distance"] = c.ud;
        curves_json.push_back(e);
    }
    j["l1_curve"] = curves_json;
    nlohmann::json dj = nlohmann::json::array();
    for (const auto& d : duality)
        dj.push_back({{"eps1", d.eps1},
                      {"eps2", d.eps2},
                      {"s", d.s},
                      {"t_prime", d.t_prime},
                      {"residual", d.residual},
                      {"l1_at_t_prime", d.l1_ref}});
    j["duality_residuals"] = dj;
    nlohmann::json mj = nlohmann::json::array();
    for (const auto& [e, v] : flow_monotone)
        mj.push_back({{"eps", e}, {"monotone_violation", v}});
    j["flow_monotone"] = mj;
    return j.dump(2);
}

std::string UniquenessReport::curves_to_csv() const {
    std::ostringstream out;
    out << "eps1,eps2,t,l1,uniform_distance\n";
    for (const auto& c : curves) {
        out << format_double(c.eps1) << ',' << format_double(c.eps2) << ','
            << format_double(c.t) << ',' << format_double(c.l1) << ',';
        if (!std::isnan(c.ud)) out << format_double(c.ud);
        out << '\n';
    }
    return out.str();
}

}  // namespace ricci
