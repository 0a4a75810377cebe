#pragma once

#include <string>
#include <vector>

#include "qsl/config.hpp"

namespace qsl {

/// Outcome of one named invariant check on one instance.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // non-empty on failure: measured vs allowed
};

struct VerifyReport {
    struct InstanceChecks {
        std::string instance_id;
        std::vector<CheckResult> checks;
    };
    std::vector<InstanceChecks> instances;

    std::size_t total() const;
    std::size_t failed() const;
    bool all_pass() const { return failed() == 0; }
};

/// Run the library's identity and inequality checks — metric axioms, block
/// structure, speed constancy, Lipschitz bounds, dispersion chain, classical
/// rank-1 limits, analytic two-level forms — on every configured instance.
VerifyReport verify_instances(const RunConfig& config);

/// Fixed-width pass/fail table with a trailing count line.
std::string to_table(const VerifyReport& report);

}
