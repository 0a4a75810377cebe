#include "qsl/runner.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

#include "qsl/matrix_io.hpp"

namespace qsl {

namespace {

struct InstanceOutcome {
    std::vector<ResultRow> rows;
    AngleTrace trace;
    bool have_trace = false;
    std::vector<std::string> errors;
    bool violation = false;
};

InstanceOutcome evaluate_instance(const Instance& inst, const RunConfig& config, RunMode mode) {
    InstanceOutcome out;
    try {
        if (mode == RunMode::bounds) {
            for (double theta : config.theta_list) {
                try {
                    ResultRow row;
                    row.instance_id = inst.id;
                    row.dim = inst.hamiltonian.dim();
                    row.rank = inst.projector.rank();
                    row.report = bound_report(inst.hamiltonian, inst.projector, theta,
                                              config.t_max, config.bounds);
                    out.rows.push_back(std::move(row));
                } catch (const BoundViolation& e) {
                    out.violation = true;
                    out.errors.push_back(inst.id + ": " + e.what());
                }
            }
        }
        out.trace = angle_trace(inst.hamiltonian, inst.projector, config.t_max, config.resolution,
                                config.bounds.crossing);
        out.have_trace = true;
    } catch (const BoundViolation& e) {
        out.violation = true;
        out.errors.push_back(inst.id + ": " + e.what());
    } catch (const Error& e) {
        out.errors.push_back(inst.id + ": " + e.what());
    }
    return out;
}

}  // namespace

RunResult run_experiment(const RunConfig& config, RunMode mode) {
    const std::vector<Instance> instances = load_instances(config);
    std::vector<InstanceOutcome> outcomes(instances.size());

    const int jobs = std::min<int>(config.jobs, static_cast<int>(instances.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < instances.size(); ++i)
            outcomes[i] = evaluate_instance(instances[i], config, mode);
    } else {
        // Work stealing over whole instances; every task is pure, so the
        // assembled output cannot depend on the schedule.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= instances.size())
                        return;
                    outcomes[i] = evaluate_instance(instances[i], config, mode);
                }
            });
        }
        for (std::thread& t : pool)
            t.join();
    }

    RunResult result;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        InstanceOutcome& out = outcomes[i];
        result.violation = result.violation || out.violation;
        for (std::string& e : out.errors)
            result.errors.push_back(std::move(e));
        for (ResultRow& row : out.rows)
            result.rows.push_back(std::move(row));
        if (out.have_trace)
            result.traces.emplace_back(instances[i].id, std::move(out.trace));
    }
    result.summary = summarize(result.rows);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + config.output_dir +
                      "': " + ec.message());
    const auto emit = [&](const std::string& name, const std::string& text) {
        const std::string path = (fs::path(config.output_dir) / name).string();
        write_file(path, text);
        result.files.push_back(path);
    };

    if (mode == RunMode::bounds) {
        if (config.format_csv) {
            emit("bounds.csv", to_csv(result.rows));
            emit("summary.csv", summary_csv(result.summary));
        }
        if (config.format_json)
            emit("bounds.json", to_json_text(result.rows, result.summary));
    }
    for (const auto& [id, trace] : result.traces)
        emit("trace_" + id + ".csv", trace_text(id, trace));

    return result;
}

}
