#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ricciflow/errors.hpp"
#include "ricciflow/scenario.hpp"

using namespace ricci;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("bundled scenarios: four of them, stable order, all parse") {
    const auto bundled = bundled_scenarios();
    REQUIRE(bundled.size() >= 4);
    CHECK(bundled[0].first == "flat.json");
    CHECK(bundled[1].first == "cone_pi.json");
    CHECK(bundled[2].first == "two_cones.json");
    CHECK(bundled[3].first == "uniqueness_ladder.json");
    for (const auto& [name, body] : bundled) {
        const Scenario sc = parse_scenario(body, name);
        CHECK(!sc.description.empty());
    }
}

TEST_CASE("flat scenario runs clean and deterministically") {
    const fs::path out1 = fresh_dir("ricci_scn_flat_1");
    const fs::path out2 = fresh_dir("ricci_scn_flat_2");

    const ScenarioResult r1 = run_scenario("flat", out1.string(), {});
    REQUIRE(r1.exit_status == 0);
    CHECK(fs::exists(out1 / "manifest.json"));
    CHECK(fs::exists(out1 / "trajectory" / "step_log.csv"));

    bool saw_stationarity = false;
    for (const auto& c : r1.checks)
        if (c.name == "stationarity") {
            saw_stationarity = true;
            CHECK(c.pass);
        }
    CHECK(saw_stationarity);

    const ScenarioResult r2 = run_scenario("flat", out2.string(), {});
    REQUIRE(r2.exit_status == 0);

    // byte-identical payloads (manifest differs only in its timestamp)
    const nlohmann::json m1 = nlohmann::json::parse(slurp(out1 / "manifest.json"));
    const nlohmann::json m2 = nlohmann::json::parse(slurp(out2 / "manifest.json"));
    CHECK(m1.at("artifacts") == m2.at("artifacts"));
    CHECK(m1.at("checks") == m2.at("checks"));

    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("atom of mass 2*pi exits 2 citing the cusp condition") {
    const std::string text = R"({
        "name": "bad_cusp",
        "experiment": "flow",
        "grid": {"nx": 16, "ny": 16, "Lx": 1.0, "Ly": 1.0},
        "surface": {"volume": 1.0,
                    "atoms": [{"x": 0.5, "y": 0.5, "mass": 6.283185307179586}],
                    "density": "constant_balancing"}
    })";
    const fs::path out = fresh_dir("ricci_scn_cusp");
    const ScenarioResult r = run_scenario_text(text, "bad_cusp.json", out.string());
    CHECK(r.exit_status == 2);
    CHECK(r.error.find("cusp") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("malformed JSON exits 2 with a line-anchored message") {
    const std::string text = "{\n  \"name\": \"x\",\n  broken\n}";
    const ScenarioResult r = run_scenario_text(text, "broken.json", "");
    CHECK(r.exit_status == 2);
    CHECK(r.error.find("broken.json:3") != std::string::npos);
}

TEST_CASE("missing required keys exit 2") {
    const ScenarioResult r = run_scenario_text(R"({"name": "x"})", "x.json", "");
    CHECK(r.exit_status == 2);
}

TEST_CASE("under-resolved mollification scale exits 2") {
    const std::string text = R"({
        "name": "tiny_eps",
        "experiment": "flow",
        "grid": {"nx": 16, "ny": 16, "Lx": 1.0, "Ly": 1.0},
        "surface": {"volume": 4.0,
                    "atoms": [{"x": 0.5, "y": 0.5, "mass": 3.14159265358979}],
                    "density": "constant_balancing"},
        "mollification": {"eps_over_h": 0.25}
    })";
    const fs::path out = fresh_dir("ricci_scn_eps");
    const ScenarioResult r = run_scenario_text(text, "tiny_eps.json", out.string());
    CHECK(r.exit_status == 2);
    fs::remove_all(out);
}

TEST_CASE("aborted main flow exits 3 and keeps the diagnostic trajectory") {
    const std::string text = R"({
        "name": "abort_flow",
        "experiment": "flow",
        "grid": {"nx": 16, "ny": 16, "Lx": 1.0, "Ly": 1.0},
        "surface": {"volume": 4.0,
                    "atoms": [{"x": 0.5, "y": 0.5, "mass": 3.14159265358979}],
                    "density": "constant_balancing"},
        "flow": {"t_end": 0.01, "dt_initial": 1e-13, "dt_max": 1e-13}
    })";
    const fs::path out = fresh_dir("ricci_scn_abort");
    const ScenarioResult r = run_scenario_text(text, "abort.json", out.string());
    CHECK(r.exit_status == 3);
    CHECK(r.error.find("abort") != std::string::npos);
    CHECK(fs::exists(out / "trajectory" / "step_log.csv"));
    fs::remove_all(out);
}

TEST_CASE("numerical failure (dt underflow in uniqueness) exits 3") {
    const std::string text = R"({
        "name": "underflow",
        "experiment": "uniqueness",
        "grid": {"nx": 16, "ny": 16, "Lx": 1.0, "Ly": 1.0},
        "surface": {"volume": 4.0,
                    "atoms": [{"x": 0.5, "y": 0.5, "mass": 3.14159265358979}],
                    "density": "constant_balancing"},
        "flow": {"t_end": 0.01, "dt_initial": 1e-13, "dt_max": 1e-13},
        "uniqueness": {"pairs_over_h": [[4.0, 2.0]]}
    })";
    const fs::path out = fresh_dir("ricci_scn_uf");
    const ScenarioResult r = run_scenario_text(text, "underflow.json", out.string());
    CHECK(r.exit_status == 3);
    fs::remove_all(out);
}

TEST_CASE("overrides rewrite scenario fields") {
    const fs::path out = fresh_dir("ricci_scn_override");
    const ScenarioResult r =
        run_scenario("flat", out.string(), {"flow.t_end=0.02", "name=flat_short"});
    REQUIRE(r.exit_status == 0);
    const nlohmann::json resolved =
        nlohmann::json::parse(slurp(out / "scenario_resolved.json"));
    CHECK(resolved.at("flow").at("t_end").get<double>() == 0.02);
    CHECK(resolved.at("name").get<std::string>() == "flat_short");
    fs::remove_all(out);
}

TEST_CASE("listing includes bundled scenarios and flags corrupted custom files") {
    const auto [text, warnings] = list_scenarios("");
    CHECK(warnings == 0);
    CHECK(text.find("flat.json") != std::string::npos);
    CHECK(text.find("uniqueness_ladder.json") != std::string::npos);

    const fs::path dir = fresh_dir("ricci_scn_custom");
    std::ofstream(dir / "good.json") << bundled_scenarios()[0].second;
    std::ofstream(dir / "corrupt.json") << "{ not json";
    const auto [text2, warnings2] = list_scenarios(dir.string());
    CHECK(warnings2 == 1);
    CHECK(text2.find("corrupt.json [error]") != std::string::npos);
    CHECK(text2.find("good.json") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("roundtrip experiment recovers a band-limited potential") {
    const std::string text = R"({
        "name": "roundtrip_smoke",
        "experiment": "roundtrip",
        "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0}
    })";
    const fs::path out = fresh_dir("ricci_scn_rt");
    const ScenarioResult r = run_scenario_text(text, "rt.json", out.string());
    CHECK(r.exit_status == 0);
    CHECK(fs::exists(out / "roundtrip_report.json"));
    CHECK(fs::exists(out / "u_true.json"));
    CHECK(fs::exists(out / "u_recovered.json"));

    // seeded variant stays deterministic and within tolerance
    const std::string seeded = R"({
        "name": "roundtrip_seeded",
        "experiment": "roundtrip",
        "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
        "seed": 7
    })";
    const ScenarioResult r2 = run_scenario_text(seeded, "rt2.json", out.string());
    CHECK(r2.exit_status == 0);
    fs::remove_all(out);
}

TEST_CASE("estimates scenario exports distance matrices") {
    const fs::path out = fresh_dir("ricci_scn_dm");
    const ScenarioResult r = run_scenario("cone_pi", out.string(), {"flow.t_end=0.02"});
    REQUIRE(r.exit_status == 0);
    CHECK(fs::exists(out / "distance_initial.csv"));
    CHECK(fs::exists(out / "distance_final.csv"));
    CHECK(fs::exists(out / "distance_initial.json"));
    CHECK(fs::exists(out / "distance_final.json"));
    fs::remove_all(out);
}

TEST_CASE("unknown scenario reference exits 2") {
    const ScenarioResult r = run_scenario("no_such_scenario", "", {});
    CHECK(r.exit_status == 2);
}

TEST_CASE("failing report-level check exits 1 with a fail manifest") {
    const std::string text = R"({
        "name": "rt_strict",
        "experiment": "roundtrip",
        "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
        "tolerances": {"roundtrip_sup_error": 1e-12}
    })";
    const fs::path out = fresh_dir("ricci_scn_fail");
    const ScenarioResult r = run_scenario_text(text, "rt_strict.json", out.string());
    CHECK(r.exit_status == 1);
    const nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(m.at("status") == "fail");
    fs::remove_all(out);
}

TEST_CASE("scenario schema is valid JSON and documents the formats") {
    const nlohmann::json schema = nlohmann::json::parse(scenario_schema());
    CHECK(schema.at("properties").contains("surface"));
    CHECK(schema.at("properties").contains("experiment"));
    const std::string text = scenario_schema();
    CHECK(text.find("constant_balancing") != std::string::npos);
    CHECK(text.find("cusp") != std::string::npos);
}

TEST_CASE("manifest records artifacts with checksums") {
    const fs::path out = fresh_dir("ricci_scn_manifest");
    const ScenarioResult r = run_scenario("flat", out.string(), {"flow.t_end=0.01"});
    REQUIRE(r.exit_status == 0);
    const nlohmann::json m = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(m.at("status") == "pass");
    REQUIRE(m.at("artifacts").size() >= 3);
    for (const auto& a : m.at("artifacts")) {
        CHECK(a.contains("path"));
        CHECK(a.at("bytes").get<std::size_t>() > 0);
        CHECK(a.at("fnv1a64").get<std::string>().size() == 16);
    }
    fs::remove_all(out);
}
