#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adabo/acquisition.hpp"
#include "adabo/adaptive.hpp"
#include "adabo/gp.hpp"
#include "adabo/objectives.hpp"
#include "adabo/types.hpp"

namespace adabo {

enum class Mode { single, combined_multi, decoupled_multi };

std::string to_string(Variant v);
std::string to_string(Mode m);

struct OptimizationConfig {
    std::vector<Interval> bounds{Interval{-5.0, 5.0}};
    std::size_t iterations = 30;
    std::size_t initial_design_size = 5;
    Variant variant = Variant::adaptive;
    Mode mode = Mode::single;
    KernelParams kernel{};
    double mean_constant = 0.0;
    AdaptiveSchedule schedule{};
    AcquisitionOptions acquisition{};
    std::uint64_t seed = 0;

    void validate() const;
};

/// One evaluation in a run. Design points come first; their offset and
/// jitter are zero because no surrogate exists yet.
struct TraceRecord {
    std::size_t iteration = 0;
    Point x;
    double y = 0.0;
    double best_so_far = 0.0;
    double offset = 0.0;
    double jitter = 0.0;
    double combined_value = 0.0;
    /// Decoupled runs only: which component was evaluated (0 = f1, 1 = f2,
    /// -1 = both, as at design points).
    int component = -1;
};

struct RunTrace {
    std::uint64_t seed = 0;
    std::vector<TraceRecord> records;
    Point best_x;
    double best_y = 0.0;
    /// Objective evaluations spent; component evaluations in decoupled mode.
    std::size_t evaluations = 0;
};

/// Objective to minimize. Must be a pure function of (x, seed) so runs are
/// reproducible and may execute concurrently.
using ScalarObjective = std::function<double(std::span<const double> x, std::uint64_t seed)>;

/// Aborted run; carries the loop iteration that failed.
class OptimizationError : public std::runtime_error {
public:
    OptimizationError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    [[nodiscard]] std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

/// Minimization form of the configured benchmark: -robust_objective for
/// Mode::single, f1 + w f2 for Mode::combined_multi. The two agree exactly.
ScalarObjective make_objective(Mode mode, const ObjectiveSpec& spec);

std::vector<Point> initial_design(std::span<const Interval> bounds, std::size_t n, SeededRng& rng);

RunTrace run(const OptimizationConfig& config, const ScalarObjective& objective);
/// Dispatches on config.mode; decoupled_multi goes to run_decoupled.
RunTrace run(const OptimizationConfig& config, const ObjectiveSpec& objective);

/// Two GPs, one per component, combined into the scalar posterior
/// (m1 + w m2, v1 + w^2 v2) with w = penalty_weight. Each component GP
/// uses the mean of its own targets as constant prior mean.
struct DecoupledState {
    std::optional<FittedGp> overage_model;
    std::optional<FittedGp> underage_model;
    std::size_t overage_evaluations = 0;
    std::size_t underage_evaluations = 0;
    double overage_weight = 1.0;
    double underage_weight = 0.1;

    [[nodiscard]] std::vector<Prediction> posterior(std::span<const Point> xs) const;
    [[nodiscard]] std::size_t total_evaluations() const {
        return overage_evaluations + underage_evaluations;
    }
};

/// Decoupled two-objective loop. Each iteration proposes by EI on the
/// scalarized posterior and evaluates only the component whose weighted
/// posterior sd is larger at the proposal. Record y is the scalarized
/// posterior mean at the proposal after the update (observed f1 + w f2 at
/// design points); best_so_far is its running minimum.
RunTrace run_decoupled(const OptimizationConfig& config, const ObjectiveSpec& objective,
                       DecoupledState* final_state = nullptr);

struct HyperparameterTrial {
    double variance = 0.0;
    double lengthscale = 0.0;
    double score = 0.0;  // inner best_y; +inf if the inner run failed
};

struct TunedHyperparameters {
    double variance = 0.0;
    double lengthscale = 0.0;
    double score = 0.0;
    std::vector<HyperparameterTrial> trials;
};

/// Box searched by tune_kernel_hyperparameters, per coordinate.
inline constexpr Interval kHyperparameterBox{0.01, 10.0};

/// Outer BayesOpt over (variance, lengthscale) in kHyperparameterBox^2.
/// Each trial runs the inner optimization (original variant) with a seed
/// derived from inner_config.seed and the trial index; its score is the
/// inner best_y (minimization), and the lowest score wins.
TunedHyperparameters tune_kernel_hyperparameters(std::size_t outer_iterations,
                                                 const OptimizationConfig& inner_config,
                                                 const ScalarObjective& objective);
TunedHyperparameters tune_kernel_hyperparameters(std::size_t outer_iterations,
                                                 const OptimizationConfig& inner_config,
                                                 const ObjectiveSpec& objective);

struct BatchEntry {
    std::uint64_t seed = 0;
    std::optional<RunTrace> trace;
    std::string error;

    [[nodiscard]] bool ok() const { return trace.has_value(); }
};

/// Runs `n_runs` seeds, base_seed + i, on up to `jobs` threads. Failures
/// are recorded per entry; results do not depend on `jobs`.
std::vector<BatchEntry> run_batch_with(std::size_t n_runs, std::uint64_t base_seed,
                                       std::size_t jobs,
                                       const std::function<RunTrace(std::uint64_t)>& runner);

std::vector<BatchEntry> run_batch(const OptimizationConfig& config,
                                  const ScalarObjective& objective, std::size_t n_runs,
                                  std::size_t jobs = 1);
std::vector<BatchEntry> run_batch(const OptimizationConfig& config, const ObjectiveSpec& objective,
                                  std::size_t n_runs, std::size_t jobs = 1);

}  // namespace adabo
