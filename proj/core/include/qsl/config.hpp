#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsl/bounds.hpp"
#include "qsl/scenarios.hpp"

namespace qsl {

/// What system an experiment runs on.
struct ScenarioConfig {
    enum class Type { two_level, ensemble, explicit_files };
    Type type = Type::two_level;

    // two_level
    double e1 = 0.0;
    double e2 = 1.0;

    // ensemble
    EnsembleSpec ensemble;

    // explicit_files
    std::string matrix_path;
    std::string basis_path;
};

/// Parsed and validated experiment description.
///
/// The on-disk format is a line-based key-value file with nested sections:
///   key value [value ...]
///   key { ... }          # nested section
///   # comment to end of line
/// Unknown or duplicate keys are errors.  Numeric values accept plain
/// floating point literals plus the forms "pi", "Npi", "pi/D", "Npi/D".
struct RunConfig {
    ScenarioConfig scenario;
    std::vector<double> theta_list;
    double t_max = 0.0;
    double resolution = 1e-3;  // trace sampling resolution, radians
    std::string output_dir = "out";
    bool format_csv = true;
    bool format_json = false;
    int jobs = 1;
    BoundOptions bounds;
};

/// Parse a numeric token, accepting the pi shorthands.
double parse_real_token(const std::string& token);

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

/// Serialize back to the file format; parse(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

/// Build the instance list a config describes.
std::vector<Instance> load_instances(const RunConfig& config);

}
