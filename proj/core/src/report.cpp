#include "qsl/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qsl/matrix_io.hpp"

namespace qsl {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON has no literals for non-finite values; encode them as strings so the
// document round-trips through strict parsers.
ordered_json json_number(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

void accumulate(SaturationSummary::Entry& e, double ratio) {
    if (!std::isfinite(ratio))
        return;
    if (e.finite_rows == 0 || ratio < e.min)
        e.min = ratio;
    e.mean += ratio;
    ++e.finite_rows;
}

void finish(SaturationSummary::Entry& e) {
    if (e.finite_rows > 0)
        e.mean /= static_cast<double>(e.finite_rows);
    else
        e.min = e.mean = std::numeric_limits<double>::quiet_NaN();
}

ordered_json entry_json(const SaturationSummary::Entry& e) {
    return ordered_json{{"finite_rows", e.finite_rows},
                        {"min", json_number(e.min)},
                        {"mean", json_number(e.mean)}};
}

}  // namespace

std::string csv_header() {
    return "instance_id,dim,rank,theta,v_hp0,delta_e,e_min,e_max,bound_commutator,"
           "bound_dispersion,bound_spectral,measured_T,reason,saturation_commutator,"
           "saturation_dispersion,saturation_spectral";
}

std::string csv_row(const ResultRow& row) {
    const BoundReport& r = row.report;
    std::ostringstream os;
    os << row.instance_id << ',' << row.dim << ',' << row.rank << ',' << format_real(r.theta)
       << ',' << format_real(r.v_hp0) << ',' << format_real(r.delta_e) << ','
       << format_real(r.e_min) << ',' << format_real(r.e_max) << ','
       << format_real(r.bound_commutator) << ',' << format_real(r.bound_dispersion) << ','
       << format_real(r.bound_spectral) << ',' << format_real(r.measured.value) << ','
       << to_string(r.measured.status) << ',' << format_real(r.saturation_commutator) << ','
       << format_real(r.saturation_dispersion) << ',' << format_real(r.saturation_spectral);
    return os.str();
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << csv_header() << '\n';
    for (const ResultRow& row : rows)
        os << csv_row(row) << '\n';
    return os.str();
}

SaturationSummary summarize(const std::vector<ResultRow>& rows) {
    SaturationSummary s;
    s.total_rows = rows.size();
    for (const ResultRow& row : rows) {
        if (!row.report.measured.finite())
            ++s.unbounded_rows;
        accumulate(s.commutator, row.report.saturation_commutator);
        accumulate(s.dispersion, row.report.saturation_dispersion);
        accumulate(s.spectral, row.report.saturation_spectral);
    }
    finish(s.commutator);
    finish(s.dispersion);
    finish(s.spectral);
    return s;
}

std::string summary_csv(const SaturationSummary& s) {
    std::ostringstream os;
    os << "bound,finite_rows,min_saturation,mean_saturation\n";
    os << "commutator," << s.commutator.finite_rows << ',' << format_real(s.commutator.min) << ','
       << format_real(s.commutator.mean) << '\n';
    os << "dispersion," << s.dispersion.finite_rows << ',' << format_real(s.dispersion.min) << ','
       << format_real(s.dispersion.mean) << '\n';
    os << "spectral," << s.spectral.finite_rows << ',' << format_real(s.spectral.min) << ','
       << format_real(s.spectral.mean) << '\n';
    os << "total_rows," << s.total_rows << ",,\n";
    os << "unbounded_rows," << s.unbounded_rows << ",,\n";
    return os.str();
}

std::string to_json_text(const std::vector<ResultRow>& rows, const SaturationSummary& s) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const ResultRow& row : rows) {
        const BoundReport& r = row.report;
        ordered_json j;
        j["instance_id"] = row.instance_id;
        j["dim"] = row.dim;
        j["rank"] = row.rank;
        j["theta"] = json_number(r.theta);
        j["v_hp0"] = json_number(r.v_hp0);
        j["delta_e"] = json_number(r.delta_e);
        j["e_min"] = json_number(r.e_min);
        j["e_max"] = json_number(r.e_max);
        j["bound_commutator"] = json_number(r.bound_commutator);
        j["bound_dispersion"] = json_number(r.bound_dispersion);
        j["bound_spectral"] = json_number(r.bound_spectral);
        j["measured_T"] = json_number(r.measured.value);
        j["reason"] = to_string(r.measured.status);
        j["saturation_commutator"] = json_number(r.saturation_commutator);
        j["saturation_dispersion"] = json_number(r.saturation_dispersion);
        j["saturation_spectral"] = json_number(r.saturation_spectral);
        doc["rows"].push_back(std::move(j));
    }
    doc["summary"] = ordered_json{{"commutator", entry_json(s.commutator)},
                                  {"dispersion", entry_json(s.dispersion)},
                                  {"spectral", entry_json(s.spectral)},
                                  {"total_rows", s.total_rows},
                                  {"unbounded_rows", s.unbounded_rows}};
    return doc.dump(2) + "\n";
}

std::string trace_text(const std::string& instance_id, const AngleTrace& trace) {
    std::ostringstream os;
    os << "# instance=" << instance_id << " v_hp0=" << format_real(trace.lipschitz) << '\n';
    os << "t,theta_t\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        os << format_real(trace.times[i]) << ',' << format_real(trace.angles[i]) << '\n';
    return os.str();
}

}
