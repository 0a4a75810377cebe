// Command-line front end: run bound experiments, verify library invariants
// on configured instances, or emit angle traces for plotting.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qsl/config.hpp"
#include "qsl/report.hpp"
#include "qsl/runner.hpp"
#include "qsl/verify.hpp"
#include "qsl/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string output;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("config", flags.config_path, "experiment config file")->required();
    cmd->add_option("--output", flags.output, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "ensemble seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::Range(1, 256));
    cmd->add_option("--format", flags.format, "csv|json|both (overrides config)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

qsl::RunConfig load(const CommonFlags& flags) {
    qsl::RunConfig config = qsl::parse_config_file(flags.config_path);
    if (!flags.output.empty())
        config.output_dir = flags.output;
    if (flags.seed_set)
        config.scenario.ensemble.seed = flags.seed;
    if (flags.jobs > 0)
        config.jobs = flags.jobs;
    if (flags.format == "csv") {
        config.format_csv = true;
        config.format_json = false;
    } else if (flags.format == "json") {
        config.format_csv = false;
        config.format_json = true;
    } else if (flags.format == "both") {
        config.format_csv = config.format_json = true;
    }
    return config;
}

int finish_run(const qsl::RunResult& result) {
    for (const std::string& path : result.files)
        std::cout << "wrote " << path << "\n";
    for (const std::string& err : result.errors)
        std::cerr << "error: " << err << "\n";
    if (result.violation)
        return 2;
    return result.errors.empty() ? 0 : 1;
}

int do_run(const CommonFlags& flags) {
    const qsl::RunConfig config = load(flags);
    const qsl::RunResult result = qsl::run_experiment(config, qsl::RunMode::bounds);
    const int code = finish_run(result);
    const auto& s = result.summary;
    std::cout << "rows " << s.total_rows << ", unbounded " << s.unbounded_rows << "\n";
    if (s.commutator.finite_rows > 0)
        std::cout << "saturation min/mean: commutator " << s.commutator.min << "/"
                  << s.commutator.mean << ", dispersion " << s.dispersion.min << "/"
                  << s.dispersion.mean << ", spectral " << s.spectral.min << "/" << s.spectral.mean
                  << "\n";
    return code;
}

int do_trace(const CommonFlags& flags) {
    const qsl::RunConfig config = load(flags);
    return finish_run(qsl::run_experiment(config, qsl::RunMode::traces_only));
}

int do_verify(const CommonFlags& flags) {
    const qsl::RunConfig config = load(flags);
    const qsl::VerifyReport report = qsl::verify_instances(config);
    std::cout << qsl::to_table(report);
    return report.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum speed limits for subspace evolution"};
    app.require_subcommand(1);

    CommonFlags run_flags, verify_flags, trace_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "evaluate bounds and write reports");
    add_common(run_cmd, run_flags);
    CLI::App* verify_cmd = app.add_subcommand("verify", "check library invariants per instance");
    add_common(verify_cmd, verify_flags);
    CLI::App* trace_cmd = app.add_subcommand("trace", "write angle traces only");
    add_common(trace_cmd, trace_flags);
    CLI::App* version_cmd = app.add_subcommand("version", "print the toolkit version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (version_cmd->parsed()) {
            std::cout << "qsl " << qsl::version_string << "\n";
            return 0;
        }
        if (run_cmd->parsed())
            return do_run(run_flags);
        if (trace_cmd->parsed())
            return do_trace(trace_flags);
        if (verify_cmd->parsed())
            return do_verify(verify_flags);
    } catch (const qsl::BoundViolation& e) {
        std::cerr << "bound violation: " << e.what() << "\n";
        return 2;
    } catch (const qsl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
