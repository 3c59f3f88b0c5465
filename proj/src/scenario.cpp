#include "ricciflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ricciflow/approximation.hpp"
#include "ricciflow/errors.hpp"
#include "ricciflow/measures.hpp"
#include "ricciflow/verification.hpp"

namespace ricci {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

ExperimentKind parse_kind(const std::string& s) {
    if (s == "flow") return ExperimentKind::Flow;
    if (s == "family") return ExperimentKind::Family;
    if (s == "estimates") return ExperimentKind::Estimates;
    if (s == "uniqueness") return ExperimentKind::Uniqueness;
    if (s == "roundtrip") return ExperimentKind::Roundtrip;
    throw ValidationError("experiment: unknown kind \"" + s +
                          "\" (expect flow|family|estimates|uniqueness|roundtrip)");
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), "cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

bool is_flat(const SingularSurfaceSpec& spec) {
    if (!spec.curvature.atoms.empty()) return false;
    for (double v : spec.curvature.density.values)
        if (v != 0.0) return false;
    return true;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ":" + std::to_string(line_of_offset(text, e.byte)) +
                              ": " + e.what());
    }

    try {
        Scenario sc;
        sc.name = j.at("name").get<std::string>();
        sc.description = j.value("description", std::string());
        sc.experiment = parse_kind(j.at("experiment").get<std::string>());

        const auto& g = j.at("grid");
        sc.grid = make_grid(g.at("nx").get<int>(), g.at("ny").get<int>(),
                            g.at("Lx").get<double>(), g.at("Ly").get<double>());

        if (j.contains("surface_file")) {
            sc.surface = surface_spec_from_json(read_file(j.at("surface_file").get<std::string>()));
            require(sc.surface->grid == sc.grid, "surface_file: grid differs from scenario grid");
        } else if (j.contains("surface")) {
            json s = j.at("surface");
            s["grid"] = {{"nx", sc.grid.nx}, {"ny", sc.grid.ny},
                         {"Lx", sc.grid.Lx}, {"Ly", sc.grid.Ly}};
            sc.surface = surface_spec_from_json(s.dump());
        }

        if (j.contains("flow")) {
            const auto& f = j.at("flow");
            sc.flow.t_end = f.value("t_end", 0.05);
            sc.flow.dt_initial = f.value("dt_initial", 1e-6);
            sc.flow.dt_safety = f.value("dt_safety", 0.8);
            sc.flow.dt_max = f.value("dt_max", 0.0);
            sc.flow.store_every = f.value("store_every", 10);
            if (f.contains("store_dt"))
                sc.flow.store_dt = f.at("store_dt").get<double>();
            else if (!f.contains("store_every"))
                sc.flow.store_dt = sc.flow.t_end / 10.0;
            const std::string scheme = f.value("scheme", "explicit");
            require(scheme == "explicit" || scheme == "semi_implicit",
                    "flow.scheme: expect explicit|semi_implicit");
            sc.flow.scheme = (scheme == "explicit") ? FlowScheme::Explicit
                                                    : FlowScheme::SemiImplicit;
        } else {
            sc.flow.store_dt = sc.flow.t_end / 10.0;
        }

        if (j.contains("mollification")) {
            const auto& m = j.at("mollification");
            sc.eps_over_h = m.value("eps_over_h", 4.0);
            if (m.contains("ladder_over_h"))
                sc.ladder_over_h = m.at("ladder_over_h").get<std::vector<double>>();
        }
        if (j.contains("samples")) sc.sample_lattice = j.at("samples").value("k", 6);
        const std::string lap = j.value("laplacian", "five_point");
        require(lap == "five_point" || lap == "spectral",
                "laplacian: expect five_point|spectral");
        sc.laplacian = (lap == "five_point") ? LaplacianKind::FivePoint : LaplacianKind::Spectral;
        sc.flow.laplacian = sc.laplacian;

        if (j.contains("uniqueness")) {
            const auto& u = j.at("uniqueness");
            if (u.contains("pairs_over_h"))
                for (const auto& p : u.at("pairs_over_h"))
                    sc.uniqueness_pairs_over_h.emplace_back(p.at(0).get<double>(),
                                                            p.at(1).get<double>());
            sc.uniqueness_distance_stride = u.value("distance_stride", 2);
        }

        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            sc.tol.stationarity = t.value("stationarity", sc.tol.stationarity);
            sc.tol.volume_drift = t.value("volume_drift", sc.tol.volume_drift);
            sc.tol.monotone_slack = t.value("monotone_slack", sc.tol.monotone_slack);
            sc.tol.curvature_lower_slack =
                t.value("curvature_lower_slack", sc.tol.curvature_lower_slack);
            sc.tol.distance_slack_fraction =
                t.value("distance_slack_fraction", sc.tol.distance_slack_fraction);
            sc.tol.diameter_ratio_max = t.value("diameter_ratio_max", sc.tol.diameter_ratio_max);
            sc.tol.duality_relative = t.value("duality_relative", sc.tol.duality_relative);
            sc.tol.roundtrip_sup_error =
                t.value("roundtrip_sup_error", sc.tol.roundtrip_sup_error);
        }

        if (j.contains("seed")) sc.seed = j.at("seed").get<unsigned long long>();
        if (j.contains("roundtrip") && j.at("roundtrip").contains("modes")) {
            for (const auto& m : j.at("roundtrip").at("modes"))
                sc.roundtrip_modes.push_back(
                    {m.at(0).get<double>(), m.at(1).get<double>(), m.at(2).get<double>()});
        }
        if (sc.roundtrip_modes.empty())
            sc.roundtrip_modes = {{1, 0, 0.1}, {0, 1, 0.07}, {2, 1, 0.05}};

        const bool needs_surface = sc.experiment != ExperimentKind::Roundtrip;
        require(!needs_surface || sc.surface.has_value(),
                "surface: required for this experiment kind");
        return sc;
    } catch (const json::exception& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

namespace {

struct Runner {
    Scenario sc;
    fs::path out;
    std::vector<CheckResult> checks;

    void check(const std::string& name, bool pass, double value, double threshold) {
        checks.push_back(CheckResult{name, pass, value, threshold});
    }

    double h() const { return std::max(sc.grid.dx(), sc.grid.dy()); }

    ScalarField initial_w(double eps) const {
        return exp2_field(potential_from_spec(*sc.surface, eps).u);
    }

    void flow_checks(const FlowTrajectory& traj, const ScalarField& w0) {
        check("flow_completed", !traj.aborted, traj.aborted ? 1.0 : 0.0, 0.0);
        const double mono = monotone_violation(traj);
        check("monotone_e^{-2t}w", mono <= sc.tol.monotone_slack, mono, sc.tol.monotone_slack);

        const double vol0 = traj.step_log.front().volume;
        double drift = 0.0;
        for (const auto& r : traj.step_log)
            drift = std::max(drift, std::abs(r.volume - vol0) / vol0);
        const double vtol = (sc.flow.scheme == FlowScheme::Explicit)
                                ? sc.tol.volume_drift * std::max(1.0, sc.flow.t_end)
                                : sc.tol.volume_drift_implicit;
        check("volume_conservation", drift <= vtol, drift, vtol);

        double min_w = traj.step_log.front().min_w;
        for (const auto& r : traj.step_log) min_w = std::min(min_w, r.min_w);
        check("positivity", min_w > 0.0, min_w, 0.0);

        if (sc.surface && is_flat(*sc.surface)) {
            double dev = 0.0;
            const ScalarField& wf = traj.final_state().w;
            for (std::size_t i = 0; i < wf.values.size(); ++i)
                dev = std::max(dev, std::abs(wf.values[i] - w0.values[i]));
            check("stationarity", dev <= sc.tol.stationarity, dev, sc.tol.stationarity);
        }
    }

    FlowTrajectory run_main_flow() {
        const ScalarField w0 = initial_w(sc.eps_over_h * h());
        FlowTrajectory traj = run_flow(w0, sc.flow);
        const SamplePointSet samples = SamplePointSet::make(sc.grid, sc.sample_lattice);
        export_trajectory(traj, (out / "trajectory").string(), &samples);
        if (traj.aborted)  // diagnostic trajectory stays on disk
            throw NumericalError("flow aborted: " + traj.abort_reason);
        flow_checks(traj, w0);
        return traj;
    }

    void run_estimates(const FlowTrajectory& traj) {
        const SamplePointSet samples = SamplePointSet::make(sc.grid, sc.sample_lattice);
        const EstimateReport rep = check_estimates(traj, samples, sc.tol.curvature_lower_slack,
                                                   sc.tol.distance_slack_fraction);
        write_file(out / "estimate_report.json", rep.to_json());

        const DistanceMatrix d0 =
            conformal_distance(half_log_field(traj.states.front().w), samples);
        const DistanceMatrix dT =
            conformal_distance(half_log_field(traj.final_state().w), samples);
        write_file(out / "distance_initial.csv", distance_matrix_to_csv(d0));
        write_file(out / "distance_final.csv", distance_matrix_to_csv(dT));
        write_file(out / "distance_initial.json", distance_matrix_to_json(d0));
        write_file(out / "distance_final.json", distance_matrix_to_json(dT));
        check("curvature_lower_bound", rep.curvature_lower_ok, rep.worst_curvature_violation,
              sc.tol.curvature_lower_slack);
        check("volume_window", rep.volume_window_ok, rep.volume_window_ok ? 0.0 : 1.0, 0.0);
        check("diameter_ratio", rep.diameter_ratio <= sc.tol.diameter_ratio_max,
              rep.diameter_ratio, sc.tol.diameter_ratio_max);
        check("distance_comparison", rep.distance_comparison_ok, rep.distance_slack_fraction,
              sc.tol.distance_slack_fraction);
    }

    void run_uniqueness() {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [a, b] : sc.uniqueness_pairs_over_h)
            pairs.emplace_back(a * h(), b * h());
        const SamplePointSet samples = SamplePointSet::make(sc.grid, sc.sample_lattice);
        const UniquenessReport rep = uniqueness_experiment(*sc.surface, pairs, sc.flow, samples,
                                                           sc.uniqueness_distance_stride);
        write_file(out / "uniqueness_report.json", rep.to_json());
        write_file(out / "uniqueness_curves.csv", rep.curves_to_csv());

        for (const auto& d : rep.duality) {
            const double bound = sc.tol.duality_relative * d.l1_ref;
            check("duality_residual(eps " + format_double(d.eps1) + "," +
                      format_double(d.eps2) + ")",
                  d.residual <= bound || d.l1_ref == 0.0, d.residual, bound);
        }
        for (const auto& [eps, violation] : rep.flow_monotone)
            check("monotone_e^{-2t}w(eps " + format_double(eps) + ")",
                  violation <= sc.tol.monotone_slack, violation, sc.tol.monotone_slack);

        // Trend between consecutive pairs: both gaps shrink at the final time.
        auto final_point = [&](std::size_t pair_idx) {
            const auto& [e1, e2] = pairs[pair_idx];
            UniquenessReport::CurvePoint best;
            for (const auto& c : rep.curves)
                if (c.eps1 == e1 && c.eps2 == e2 && c.t >= best.t) best = c;
            return best;
        };
        for (std::size_t p = 1; p < pairs.size(); ++p) {
            const auto prev = final_point(p - 1);
            const auto cur = final_point(p);
            check("l1_trend(pair " + std::to_string(p) + ")", cur.l1 < prev.l1, cur.l1, prev.l1);
            if (!std::isnan(prev.ud) && !std::isnan(cur.ud))
                check("uniform_distance_trend(pair " + std::to_string(p) + ")", cur.ud < prev.ud,
                      cur.ud, prev.ud);
        }
    }

    void run_family() {
        std::vector<double> ladder;
        for (double e : sc.ladder_over_h) ladder.push_back(e * h());
        const MollifiedFamily fam = build_family(*sc.surface, ladder, sc.sample_lattice);
        write_file(out / "family_report.json", fam.report_json());

        for (const auto& m : fam.members) {
            check("family_volume(eps " + format_double(m.eps) + ")",
                  std::abs(m.volume - sc.surface->volume) <= 1e-8 * sc.surface->volume,
                  m.volume, sc.surface->volume);
            check("family_lower_bound(eps " + format_double(m.eps) + ")", m.lower_bound_ok,
                  m.min_curvature, sc.surface->lower_bound - 0.05);
            const double tot = m.field.measure.total();
            check("family_zero_total_curvature(eps " + format_double(m.eps) + ")",
                  std::abs(tot) <= 1e-10 * std::max(1.0, m.field.measure.total_variation()),
                  tot, 1e-10);
        }
        for (std::size_t i = 2; i < fam.members.size(); ++i)
            check("family_gh_decreasing(" + std::to_string(i) + ")",
                  fam.members[i].gh_to_previous <=
                      1.1 * fam.members[i - 1].gh_to_previous,
                  fam.members[i].gh_to_previous, 1.1 * fam.members[i - 1].gh_to_previous);
    }

    void run_roundtrip() {
        ScalarField u_true(sc.grid);
        std::vector<std::array<double, 3>> modes = sc.roundtrip_modes;
        if (sc.seed) {
            std::mt19937_64 rng(*sc.seed);
            std::uniform_real_distribution<double> amp(-0.1, 0.1);
            modes.clear();
            for (const auto& k :
                 {std::array<int, 2>{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}})
                modes.push_back({double(k[0]), double(k[1]), amp(rng)});
        }
        const double two_pi = 2.0 * std::numbers::pi;
        for (int iy = 0; iy < sc.grid.ny; ++iy)
            for (int ix = 0; ix < sc.grid.nx; ++ix) {
                double v = 0.0;
                for (const auto& m : modes)
                    v += m[2] * std::cos(two_pi * (m[0] * sc.grid.x_of(ix) / sc.grid.Lx +
                                                   m[1] * sc.grid.y_of(iy) / sc.grid.Ly));
                u_true.at(ix, iy) = v;
            }

        const ScalarField w = exp2_field(u_true);
        const double vol = integrate(w);
        const SignedMeasure mu = curvature_measure(w, sc.laplacian).negated();
        const PotentialField rec = solve_potential(mu, vol, 2.0 * h());

        double sup_err = 0.0;
        for (std::size_t i = 0; i < u_true.values.size(); ++i)
            sup_err = std::max(sup_err, std::abs(rec.u.values[i] - u_true.values[i]));

        json rep;
        rep["sup_error"] = sup_err;
        rep["volume"] = vol;
        rep["modes"] = json::array();
        for (const auto& m : modes) rep["modes"].push_back({m[0], m[1], m[2]});
        write_file(out / "roundtrip_report.json", rep.dump(2));
        write_file(out / "u_true.json", field_to_json(u_true));
        write_file(out / "u_recovered.json", field_to_json(rec.u));
        check("roundtrip_sup_error", sup_err <= sc.tol.roundtrip_sup_error, sup_err,
              sc.tol.roundtrip_sup_error);
    }

    void run() {
        switch (sc.experiment) {
            case ExperimentKind::Flow:
                run_main_flow();
                break;
            case ExperimentKind::Estimates: {
                const FlowTrajectory traj = run_main_flow();
                run_estimates(traj);
                if (!sc.uniqueness_pairs_over_h.empty()) run_uniqueness();
                break;
            }
            case ExperimentKind::Family:
                run_family();
                break;
            case ExperimentKind::Uniqueness:
                require(!sc.uniqueness_pairs_over_h.empty(),
                        "uniqueness: pairs_over_h must be provided");
                run_uniqueness();
                break;
            case ExperimentKind::Roundtrip:
                run_roundtrip();
                break;
        }
    }
};

void write_manifest(const fs::path& out, const std::string& name,
                    const std::vector<CheckResult>& checks, int exit_status) {
    json j;
    j["scenario"] = name;
    {
        char buf[32];
        const std::time_t now = std::time(nullptr);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["generated_at"] = buf;
    }
    json arts = json::array();
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(out))
        if (e.is_regular_file() && e.path().filename() != "manifest.json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        const std::string bytes = read_file(p);
        arts.push_back({{"path", fs::relative(p, out).generic_string()},
                        {"bytes", bytes.size()},
                        {"fnv1a64", hex64(fnv1a64(bytes))}});
    }
    j["artifacts"] = arts;
    json cj = json::array();
    for (const auto& c : checks)
        cj.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value},
                      {"threshold", c.threshold}});
    j["checks"] = cj;
    j["status"] = (exit_status == 0) ? "pass" : "fail";
    j["exit_status"] = exit_status;
    write_file(out / "manifest.json", j.dump(2));
}

}  // namespace

ScenarioResult run_scenario_text(const std::string& text, const std::string& source,
                                 const std::string& out_dir) {
    ScenarioResult result;
    Scenario sc;
    try {
        sc = parse_scenario(text, source);
    } catch (const ValidationError& e) {
        result.exit_status = 2;
        result.error = e.what();
        return result;
    }

    fs::path out;
    if (!out_dir.empty()) {
        out = out_dir;
    } else {
        // RICCIFLOW_OUT overrides the default output base directory.
        const char* base = std::getenv("RICCIFLOW_OUT");
        out = fs::path(base ? base : "out") / sc.name;
    }
    result.output_dir = out.string();
    fs::create_directories(out);
    write_file(out / "scenario_resolved.json", text);

    Runner runner{sc, out, {}};
    try {
        runner.run();
    } catch (const ValidationError& e) {
        result.exit_status = 2;
        result.error = e.what();
        result.checks = runner.checks;
        write_manifest(out, sc.name, runner.checks, 2);
        return result;
    } catch (const NumericalError& e) {
        result.exit_status = 3;
        result.error = e.what();
        result.checks = runner.checks;
        write_manifest(out, sc.name, runner.checks, 3);
        return result;
    }

    bool all_pass = true;
    for (const auto& c : runner.checks) all_pass = all_pass && c.pass;
    result.exit_status = all_pass ? 0 : 1;
    result.checks = runner.checks;
    write_manifest(out, sc.name, runner.checks, result.exit_status);
    return result;
}

ScenarioResult run_scenario(const std::string& ref, const std::string& out_dir,
                            const std::vector<std::string>& overrides) {
    std::string text;
    std::string source = ref;
    if (fs::exists(ref)) {
        text = read_file(ref);
    } else {
        for (const auto& [name, body] : bundled_scenarios()) {
            if (name == ref || name == ref + ".json" || fs::path(name).stem() == ref) {
                text = body;
                source = "bundled:" + name;
                break;
            }
        }
        if (text.empty()) {
            ScenarioResult r;
            r.exit_status = 2;
            r.error = "scenario not found: " + ref;
            return r;
        }
    }

    if (!overrides.empty()) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            ScenarioResult r;
            r.exit_status = 2;
            r.error = source + ":" + std::to_string(line_of_offset(text, e.byte)) + ": " +
                      e.what();
            return r;
        }
        for (const std::string& ov : overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos) {
                ScenarioResult r;
                r.exit_status = 2;
                r.error = "override must look like key.path=value: " + ov;
                return r;
            }
            const std::string key = ov.substr(0, eq);
            const std::string val = ov.substr(eq + 1);
            json* node = &j;
            std::stringstream ss(key);
            std::string part;
            std::vector<std::string> parts;
            while (std::getline(ss, part, '.')) parts.push_back(part);
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
            json parsed = json::parse(val, nullptr, false);
            (*node)[parts.back()] = parsed.is_discarded() ? json(val) : parsed;
        }
        text = j.dump(2);
    }
    return run_scenario_text(text, source, out_dir);
}

std::pair<std::string, int> list_scenarios(const std::string& custom_dir) {
    std::ostringstream out;
    int warnings = 0;
    out << "bundled scenarios:\n";
    for (const auto& [name, body] : bundled_scenarios()) {
        try {
            const Scenario sc = parse_scenario(body, name);
            out << "  " << name << " - " << sc.description << '\n';
        } catch (const ValidationError& e) {
            out << "  " << name << " [error] " << e.what() << '\n';
            ++warnings;
        }
    }
    std::string dir = custom_dir;
    if (dir.empty())
        if (const char* env = std::getenv("RICCIFLOW_SCENARIO_DIR")) dir = env;
    if (!dir.empty() && fs::is_directory(dir)) {
        out << "custom scenarios (" << dir << "):\n";
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
            try {
                const Scenario sc = parse_scenario(read_file(p), p.filename().string());
                out << "  " << p.filename().string() << " - " << sc.description << '\n';
            } catch (const ValidationError& e) {
                out << "  " << p.filename().string() << " [error] " << e.what() << '\n';
                ++warnings;
            }
        }
    }
    if (warnings) out << warnings << " scenario file(s) failed to parse\n";
    return {out.str(), warnings};
}

}  // namespace ricci
