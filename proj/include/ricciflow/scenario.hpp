#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ricciflow/flow.hpp"
#include "ricciflow/potential.hpp"

namespace ricci {

enum class ExperimentKind { Flow, Family, Estimates, Uniqueness, Roundtrip };

struct Tolerances {
    double stationarity = 1e-12;
    double volume_drift = 1e-9;          // relative, explicit scheme
    double volume_drift_implicit = 1e-6;
    double monotone_slack = 1e-9;
    double curvature_lower_slack = 0.05;
    double distance_slack_fraction = 0.02;
    double diameter_ratio_max = 2.0;
    double duality_relative = 1e-3;
    double roundtrip_sup_error = 0.05;
};

struct Scenario {
    std::string name;
    std::string description;
    ExperimentKind experiment = ExperimentKind::Flow;
    TorusGrid grid;
    std::optional<SingularSurfaceSpec> surface;
    FlowControls flow;
    double eps_over_h = 4.0;                      // single-mollification runs
    std::vector<double> ladder_over_h = {8, 4, 2};
    std::vector<std::pair<double, double>> uniqueness_pairs_over_h;
    int uniqueness_distance_stride = 2;
    int sample_lattice = 6;
    LaplacianKind laplacian = LaplacianKind::FivePoint;
    Tolerances tol;
    std::optional<unsigned long long> seed;
    std::vector<std::array<double, 3>> roundtrip_modes;  // kx, ky, amplitude
};

// Parses and validates; throws ValidationError with a line-anchored message
// for malformed JSON and a path-anchored one for semantic violations.
Scenario parse_scenario(const std::string& json_text, const std::string& source_name);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct ScenarioResult {
    int exit_status = 0;  // 0 pass, 1 checks failed, 2 schema, 3 numerical
    std::string output_dir;
    std::vector<CheckResult> checks;
    std::string error;
};

// Executes the scenario; `spec_text` is the raw scenario JSON (after any
// overrides). Emits artifacts plus manifest.json into out_dir.
ScenarioResult run_scenario_text(const std::string& spec_text, const std::string& source_name,
                                 const std::string& out_dir);

// Resolves `ref` as a file path or a bundled scenario name, applies
// "key.path=value" overrides, and runs.
ScenarioResult run_scenario(const std::string& ref, const std::string& out_dir,
                            const std::vector<std::string>& overrides = {});

// Bundled scenarios in stable order: {file name, json text}.
std::vector<std::pair<std::string, std::string>> bundled_scenarios();

// Listing of bundled plus custom-directory scenarios; returns the text and the
// number of entries that failed to parse.
std::pair<std::string, int> list_scenarios(const std::string& custom_dir = "");

// The published scenario JSON schema.
std::string scenario_schema();

}  // namespace ricci
