#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsl/bounds.hpp"

namespace qsl {

/// One output row: a bound report tagged with the instance it came from.
struct ResultRow {
    std::string instance_id;
    std::size_t dim = 0;
    std::size_t rank = 0;
    BoundReport report;
};

/// Min/mean saturation ratios over the rows where the measured time and the
/// bound are both finite.
struct SaturationSummary {
    struct Entry {
        std::size_t finite_rows = 0;
        double min = 0.0;
        double mean = 0.0;
    };
    Entry commutator;
    Entry dispersion;
    Entry spectral;
    std::size_t total_rows = 0;
    std::size_t unbounded_rows = 0;  // rows whose measured time is not finite
};

std::string csv_header();
std::string csv_row(const ResultRow& row);
std::string to_csv(const std::vector<ResultRow>& rows);

SaturationSummary summarize(const std::vector<ResultRow>& rows);
std::string summary_csv(const SaturationSummary& s);

/// Rows plus summary as a JSON document.  Non-finite numbers are encoded as
/// the strings "inf", "-inf", "nan" so the output stays valid JSON.
std::string to_json_text(const std::vector<ResultRow>& rows, const SaturationSummary& s);

/// Plottable two-column text: a comment header naming the instance and the
/// speed used to pick the step, a column header, then t,theta_t lines.
std::string trace_text(const std::string& instance_id, const AngleTrace& trace);

}
