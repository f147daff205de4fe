#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adabo/optimizer.hpp"

namespace adabo::bench {

enum class Problem { robust_1d, multi_combined, multi_decoupled, quadratic_test };

std::string to_string(Problem p);
Problem parse_problem(std::string_view name);
Variant parse_variant(std::string_view name);

/// Invalid configuration. `line` is 0 when the error is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::size_t line = 0, std::string key = {})
        : std::runtime_error(what), line_(line), key_(std::move(key)) {}

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] const std::string& key() const { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

/// Flat experiment description; see README for the key list.
struct ExperimentConfig {
    Problem problem = Problem::robust_1d;
    std::vector<Variant> variants{Variant::adaptive, Variant::original};
    std::size_t iterations = 30;
    std::size_t initial_design_size = 5;
    std::size_t runs = 10;
    std::uint64_t base_seed = 0;
    std::size_t dim = 1;
    double lower = -5.0;
    double upper = 5.0;

    double kernel_variance = 1.0;
    double kernel_lengthscale = 1.0;
    /// Unset: 1e-2 for the stochastic problems, 1e-8 for quadratic_test.
    std::optional<double> noise_variance;
    double diag_jitter = 1e-10;
    double mean_constant = 0.0;

    AdaptiveSchedule schedule{};
    ObjectiveSpec objective{};
    AcquisitionOptions acquisition{};

    std::vector<std::size_t> run_counts{10, 30, 50, 100};
    std::uint64_t stability_seed_offset = 1000000;
    std::size_t tune_outer_iterations = 30;
    std::size_t jobs = 1;
    std::string output_dir = "out";

    /// Throws ConfigError when any value violates its invariant.
    void validate() const;

    [[nodiscard]] double effective_noise_variance() const;
    [[nodiscard]] Mode mode() const;
    [[nodiscard]] ObjectiveSpec objective_spec() const;
    [[nodiscard]] OptimizationConfig optimization_config(Variant variant, std::uint64_t seed) const;
    /// Minimization objective for the scalar problems (not multi_decoupled).
    [[nodiscard]] ScalarObjective scalar_objective() const;
    /// One run of the configured problem.
    [[nodiscard]] RunTrace run_one(const OptimizationConfig& config) const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys,
/// duplicates and malformed values are ConfigErrors with the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key, one per line, in a fixed order. parse_config accepts it.
std::string serialize_config(const ExperimentConfig& config);

/// Applies one key/value pair (shared by the parser and CLI overrides).
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

}  // namespace adabo::bench
