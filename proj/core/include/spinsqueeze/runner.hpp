#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinsqueeze/scenario_config.hpp"

namespace sqz {

// One scenario run, end to end: dispatch on config.mode, integrate, locate
// the squeezing optimum where applicable, and emit CSV (and optional SVG)
// artifacts under output.dir.

struct RunReport {
    RunMode mode = RunMode::budget;
    // Human-readable (name, value) rows; frequencies carry both rad/s and Hz.
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> files;
    bool has_optimum = false;
    double t_opt = 0.0;
    double xi2_opt = 0.0;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

struct RunOptions {
    int workers = 1;        // parallel sweep entries
    bool force_svg = false; // plot regardless of output.svg
    std::string out_dir;    // overrides output.dir when nonempty
};

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

void print_report(const RunReport& report, std::ostream& os);

// Full command-line entry point. Exit codes: 0 success, 1 usage/config/io,
// 2 runtime failure (integration, truncation, internal).
int cli_main(int argc, char** argv);

} // namespace sqz
