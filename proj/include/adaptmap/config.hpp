#pragma once

#include <string>

#include "adaptmap/model.hpp"
#include "adaptmap/sweep.hpp"

namespace adaptmap {

struct tolerance_set {
    double map_tol = 1e-10;
    double orbit_tol = 1e-7;
    double root_tol = 1e-10;
};

struct output_spec {
    std::string format = "csv"; // csv | json
    std::string path;           // empty means stdout
};

/// Parsed configuration: flat sections [model], [tolerances], [protocol],
/// [output]. Unknown keys are errors; omitted tolerances take defaults.
struct run_config {
    model_params params;
    bool has_v_reset = false;
    tolerance_set tol;
    sweep_protocol protocol;
    output_spec output;
    std::string digest; // fnv1a over the raw text, for output provenance
};

run_config parse_config(const std::string& text);
run_config load_config_file(const std::string& path);

} // namespace adaptmap
