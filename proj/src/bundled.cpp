#include "ricciflow/scenario.hpp"

namespace ricci {

// The four bundled scenarios, in stable listing order. Parameters are chosen
// so every report-level check passes at desk scale on one core.
std::vector<std::pair<std::string, std::string>> bundled_scenarios() {
    static const std::pair<std::string, std::string> entries[] = {
        {"flat.json", R"json({
  "name": "flat",
  "description": "Stationary flat torus: w == 1 is a fixed point of the flow.",
  "experiment": "flow",
  "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
  "surface": {"volume": 1.0, "lower_bound": -1.0, "atoms": [], "density": "constant_balancing"},
  "flow": {"t_end": 0.1, "dt_initial": 1e-6, "dt_safety": 0.8, "scheme": "explicit", "store_dt": 0.01}
})json"},
        {"cone_pi.json", R"json({
  "name": "cone_pi",
  "description": "One conical point of curvature pi with balancing negative density; estimate and uniqueness checks.",
  "experiment": "estimates",
  "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
  "surface": {"volume": 32.0, "lower_bound": -1.0, "atoms": [{"x": 0.5, "y": 0.5, "mass": 3.141592653589793}], "density": "constant_balancing"},
  "flow": {"t_end": 0.05, "dt_initial": 1e-6, "dt_safety": 0.8, "scheme": "explicit", "store_dt": 0.005},
  "mollification": {"eps_over_h": 4.0},
  "samples": {"k": 6},
  "uniqueness": {"pairs_over_h": [[4.0, 2.0]], "distance_stride": 2}
})json"},
        {"two_cones.json", R"json({
  "name": "two_cones",
  "description": "Two conical points (3pi/2 and pi/2) with balancing density; mollified family diagnostics.",
  "experiment": "family",
  "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
  "surface": {"volume": 16.0, "lower_bound": -1.0, "atoms": [{"x": 0.25, "y": 0.25, "mass": 4.71238898038469}, {"x": 0.75, "y": 0.75, "mass": 1.5707963267948966}], "density": "constant_balancing"},
  "mollification": {"ladder_over_h": [8.0, 4.0, 2.0]},
  "samples": {"k": 6}
})json"},
        {"uniqueness_ladder.json", R"json({
  "name": "uniqueness_ladder",
  "description": "Mollification pairs (8h,4h) and (4h,2h) of the one-cone surface: L1 and uniform-distance gaps shrink down the ladder.",
  "experiment": "uniqueness",
  "grid": {"nx": 64, "ny": 64, "Lx": 1.0, "Ly": 1.0},
  "surface": {"volume": 8.0, "lower_bound": -1.0, "atoms": [{"x": 0.5, "y": 0.5, "mass": 3.141592653589793}], "density": "constant_balancing"},
  "flow": {"t_end": 0.05, "dt_initial": 1e-6, "dt_safety": 0.8, "scheme": "explicit", "store_dt": 0.0025},
  "samples": {"k": 6},
  "uniqueness": {"pairs_over_h": [[8.0, 4.0], [4.0, 2.0]], "distance_stride": 4}
})json"}};
    return {std::begin(entries), std::end(entries)};
}

std::string scenario_schema() {
    return R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ricciflow scenario",
  "type": "object",
  "required": ["name", "experiment", "grid"],
  "properties": {
    "name": {"type": "string"},
    "description": {"type": "string"},
    "experiment": {"enum": ["flow", "family", "estimates", "uniqueness", "roundtrip"]},
    "grid": {
      "type": "object",
      "required": ["nx", "ny", "Lx", "Ly"],
      "properties": {
        "nx": {"type": "integer", "minimum": 8},
        "ny": {"type": "integer", "minimum": 8},
        "Lx": {"type": "number", "exclusiveMinimum": 0},
        "Ly": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "surface": {
      "type": "object",
      "required": ["volume", "density"],
      "properties": {
        "volume": {"type": "number", "exclusiveMinimum": 0},
        "lower_bound": {"type": "number", "default": -1.0},
        "atoms": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["x", "y", "mass"],
            "properties": {
              "x": {"type": "number"},
              "y": {"type": "number"},
              "mass": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 6.283185307179586,
                       "description": "cusp condition: every atom mass must be < 2*pi"}
            }
          }
        },
        "density": {
          "oneOf": [
            {"const": "constant_balancing",
             "description": "density == -(sum of atom masses)/(Lx*Ly)"},
            {"type": "array", "items": {"type": "number"},
             "description": "row-major nx*ny array; total measure must vanish"}
          ]
        }
      }
    },
    "surface_file": {"type": "string", "description": "path to a SingularSurfaceSpec JSON file; alternative to surface"},
    "flow": {
      "type": "object",
      "properties": {
        "t_end": {"type": "number", "exclusiveMinimum": 0, "default": 0.05},
        "dt_initial": {"type": "number", "exclusiveMinimum": 0, "default": 1e-6},
        "dt_safety": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.8},
        "dt_max": {"type": "number", "minimum": 0, "default": 0, "description": "0 = unbounded"},
        "scheme": {"enum": ["explicit", "semi_implicit"], "default": "explicit"},
        "store_dt": {"type": "number", "minimum": 0, "default": "t_end/10",
                     "description": "checkpoint spacing; steps land exactly on multiples"},
        "store_every": {"type": "integer", "minimum": 1, "default": 10,
                        "description": "used only when store_dt == 0"}
      }
    },
    "mollification": {
      "type": "object",
      "properties": {
        "eps_over_h": {"type": "number", "minimum": 1, "default": 4},
        "ladder_over_h": {"type": "array", "items": {"type": "number"}, "default": [8, 4, 2]}
      }
    },
    "samples": {
      "type": "object",
      "properties": {"k": {"type": "integer", "minimum": 4, "default": 6,
                           "description": "k x k sublattice plus the 4 quarter-lattice corners"}}
    },
    "laplacian": {"enum": ["five_point", "spectral"], "default": "five_point"},
    "uniqueness": {
      "type": "object",
      "properties": {
        "pairs_over_h": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}},
        "distance_stride": {"type": "integer", "minimum": 0, "default": 2}
      }
    },
    "roundtrip": {
      "type": "object",
      "properties": {
        "modes": {"type": "array", "items": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
                  "description": "[kx, ky, amplitude] cosine modes for the band-limited potential"}
      }
    },
    "tolerances": {
      "type": "object",
      "properties": {
        "stationarity": {"type": "number", "default": 1e-12},
        "volume_drift": {"type": "number", "default": 1e-9},
        "monotone_slack": {"type": "number", "default": 1e-9},
        "curvature_lower_slack": {"type": "number", "default": 0.05},
        "distance_slack_fraction": {"type": "number", "default": 0.02},
        "diameter_ratio_max": {"type": "number", "default": 2.0},
        "duality_relative": {"type": "number", "default": 1e-3},
        "roundtrip_sup_error": {"type": "number", "default": 0.05}
      }
    },
    "seed": {"type": "integer", "description": "enables seeded randomness (roundtrip modes)"}
  }
}
)json";
}

}  // namespace ricci
