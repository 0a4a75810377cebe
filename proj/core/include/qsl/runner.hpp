#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qsl/config.hpp"
#include "qsl/report.hpp"

namespace qsl {

enum class RunMode {
    bounds,       // bound reports + angle traces + summary
    traces_only,  // angle traces only
};

/// Everything a run produced, in deterministic instance order.
struct RunResult {
    std::vector<ResultRow> rows;
    std::vector<std::pair<std::string, AngleTrace>> traces;
    SaturationSummary summary;
    std::vector<std::string> files;   // paths written, in write order
    std::vector<std::string> errors;  // per-task failure diagnostics
    bool violation = false;           // a proven inequality failed: defect, exit 2
};

/// Load the instances a config describes, evaluate every (instance, theta)
/// task — in parallel when config.jobs > 1, with output independent of the
/// job count — and write the requested files under config.output_dir.
RunResult run_experiment(const RunConfig& config, RunMode mode = RunMode::bounds);

}
