#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adabo/bench/config.hpp"

namespace adabo::bench {

/// Files produced by a command, as (relative path, contents). Commands
/// compute everything first; nothing touches the disk until write_outputs.
struct CommandOutput {
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    /// Runs that failed; a non-empty list maps to exit code 2.
    std::vector<std::string> failures;
    /// Non-fatal observations, printed by the CLI.
    std::vector<std::string> notes;

    [[nodiscard]] const std::string& file(const std::filesystem::path& rel) const;
};

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trace CSV per run plus a summary CSV, for every configured variant.
CommandOutput cmd_run(const ExperimentConfig& config);

/// Paired-seed comparison of exactly two variants, written to compare.json.
/// Statistics are computed on negated final best values, so positive
/// t / d / g / delta favor variant A.
CommandOutput cmd_compare(const ExperimentConfig& config);

/// Stability table over config.run_counts for every variant.
CommandOutput cmd_stability(const ExperimentConfig& config);

/// Kernel hyperparameter meta-tuning, written to tune.json.
CommandOutput cmd_tune(const ExperimentConfig& config);

void write_outputs(const CommandOutput& output, const std::filesystem::path& out_dir);

}  // namespace adabo::bench
