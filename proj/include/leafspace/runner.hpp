#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "leafspace/catalog.hpp"

namespace leafspace {

/// One CLI invocation. Identical configs (including the seed) produce
/// byte-identical reports apart from the timestamp field.
struct RunConfig {
    std::string command;                    // lift | recurrence | atlas | check | example
    std::string check;                      // hausdorff|proper|orbifold|killing|slice|bundle
    std::string example_name;               // catalog scenario for `example`
    std::optional<std::string> scenario_file;
    int n = 4;
    std::string group = "circle";           // circle | line
    std::optional<Vec> at;                  // base point for lift/recurrence/slice
    double path_delta = 1.0;                // group displacement for `lift`
    int budget_K = -1;                      // -1: scenario default
    double window_B = -1.0;
    int grid_size = -1;
    int sample_count = -1;
    double tol = -1.0;                      // -1: module defaults
    uint64_t seed = 20200704;
    std::optional<std::string> out_dir;
    bool want_recurrence = false;
    bool want_lift = false;
    bool want_atlas = false;
    bool want_limit_elements = false;
};

struct RunResult {
    int exit_code = 0;  // 0 checks pass, 1 check failed, 2 invalid input
    nlohmann::json report;
};

/// Executes the configured command, assembles report.json (plus CSV
/// trajectories and per-leaf polylines when applicable) under out_dir, and
/// returns the exit code with the report. Numeric module errors surface as
/// structured report entries, never exceptions.
RunResult run(const RunConfig& config);

/// The report minus its volatile fields (timestamp), for determinism checks.
nlohmann::json stable_report(nlohmann::json report);

}  // namespace leafspace
