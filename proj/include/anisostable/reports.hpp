#ifndef ANISOSTABLE_REPORTS_HPP
#define ANISOSTABLE_REPORTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "anisostable/spectral_measure.hpp"

namespace astab {

enum class Suite { fast, full };

struct CheckResult {
    std::string name;
    std::string anchor; // slug naming the identity or bound being checked
    double predicted = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool one_sided = false; // pass when measured <= predicted + tolerance
    bool pass = false;
    double runtime_s = 0.0;
    std::string error; // nonempty when the check itself failed to run
};

struct ExperimentReport {
    std::string model_json;
    Suite suite = Suite::fast;
    std::uint64_t seed = 0;
    std::optional<SmoothnessIndices> indices;
    std::vector<CheckResult> checks;
    std::string validation_error; // model construction failure, if any
    bool all_pass() const;
};

// Runs the verification experiments for the configured model and writes
// checks.jsonl, summary.json and profile CSVs under out_dir (created if
// missing).  Failures are captured per check; a validation failure produces
// a report with that single entry.
ExperimentReport run_experiment(const std::string& config_path, Suite suite,
                                std::uint64_t seed, const std::string& out_dir);

} // namespace astab

#endif
