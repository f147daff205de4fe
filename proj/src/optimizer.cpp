#include "adabo/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace adabo {

namespace {

// Sub-stream identifiers for derive_seed.
constexpr std::uint64_t kDesignStream = 1;
constexpr std::uint64_t kAcquisitionStream = 2;
constexpr std::uint64_t kEvaluationStream = 3;
constexpr std::uint64_t kTuneOuterStream = 4;
constexpr std::uint64_t kTuneInnerStream = 5;

constexpr double kInf = std::numeric_limits<double>::infinity();

FittedGp refit(const Dataset& data, const OptimizationConfig& config, std::size_t iteration,
               double mean_constant) {
    try {
        return FittedGp::fit_with_escalation(data, config.kernel, mean_constant);
    } catch (const CholeskyError& e) {
        throw OptimizationError("GP fit failed at iteration " + std::to_string(iteration) +
                                    " after jitter escalation: " + e.what(),
                                iteration);
    }
}

FittedGp refit(const Dataset& data, const OptimizationConfig& config, std::size_t iteration) {
    return refit(data, config, iteration, config.mean_constant);
}

double target_mean(const Dataset& data) {
    double acc = 0.0;
    for (double v : data.targets) acc += v;
    return acc / static_cast<double>(data.targets.size());
}

// Appends a record and maintains best_so_far / best_x / best_y.
void push_record(RunTrace& trace, TraceRecord rec) {
    const bool first = trace.records.empty();
    if (first || rec.y < trace.best_y) {
        trace.best_y = rec.y;
        trace.best_x = rec.x;
    }
    rec.best_so_far = trace.best_y;
    trace.records.push_back(std::move(rec));
}

double checked(double y, std::size_t iteration) {
    if (!std::isfinite(y)) {
        throw OptimizationError("objective returned a non-finite value at iteration " +
                                    std::to_string(iteration),
                                iteration);
    }
    return y;
}

}  // namespace

std::string to_string(Variant v) {
    return v == Variant::adaptive ? "adaptive" : "original";
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::single: return "single";
        case Mode::combined_multi: return "combined_multi";
        case Mode::decoupled_multi: return "decoupled_multi";
    }
    return "unknown";
}

void OptimizationConfig::validate() const {
    validate_bounds(bounds);
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (initial_design_size < 1) throw std::invalid_argument("initial_design_size must be >= 1");
    kernel.validate();
    schedule.validate();
    acquisition.validate();
    if (!std::isfinite(mean_constant)) throw std::invalid_argument("mean_constant must be finite");
}

ScalarObjective make_objective(Mode mode, const ObjectiveSpec& spec) {
    spec.validate();
    auto require_1d = [](std::span<const double> x) {
        if (x.size() != 1) {
            throw std::invalid_argument("robust objective is one-dimensional, got dimension " +
                                        std::to_string(x.size()));
        }
        return x[0];
    };
    switch (mode) {
        case Mode::single:
            return [spec, require_1d](std::span<const double> x, std::uint64_t seed) {
                SeededRng rng(seed);
                return -robust_objective(require_1d(x), spec, rng);
            };
        case Mode::combined_multi:
            return [spec, require_1d](std::span<const double> x, std::uint64_t seed) {
                SeededRng rng(seed);
                return scalarize(multiobjective_components(require_1d(x), spec, rng),
                                 spec.penalty_weight);
            };
        case Mode::decoupled_multi:
            break;
    }
    throw std::invalid_argument("decoupled mode has no scalar objective; use run_decoupled");
}

std::vector<Point> initial_design(std::span<const Interval> bounds, std::size_t n, SeededRng& rng) {
    validate_bounds(bounds);
    if (n < 1) throw std::invalid_argument("initial design needs at least one point");
    std::vector<Point> out(n, Point(bounds.size()));
    for (auto& p : out) {
        for (std::size_t j = 0; j < bounds.size(); ++j) {
            p[j] = rng.uniform(bounds[j].lower, bounds[j].upper);
        }
    }
    return out;
}

RunTrace run(const OptimizationConfig& config, const ScalarObjective& objective) {
    config.validate();
    if (config.mode == Mode::decoupled_multi) {
        throw std::invalid_argument("run: decoupled mode requires run_decoupled");
    }

    SeededRng design_rng(derive_seed(config.seed, kDesignStream));
    SeededRng acquisition_rng(derive_seed(config.seed, kAcquisitionStream));

    RunTrace trace;
    trace.seed = config.seed;
    Dataset data;

    auto evaluate = [&](const Point& x, std::size_t iteration) {
        const std::uint64_t eval_seed =
            derive_seed(config.seed, kEvaluationStream, trace.evaluations);
        ++trace.evaluations;
        return checked(objective(x, eval_seed), iteration);
    };

    for (Point& x : initial_design(config.bounds, config.initial_design_size, design_rng)) {
        const double y = evaluate(x, 0);
        TraceRecord rec;
        rec.iteration = trace.records.size();
        rec.x = x;
        rec.y = y;
        rec.combined_value = combined_value(condition_mean(config.mean_constant, 0.0), y);
        push_record(trace, std::move(rec));
        data.points.push_back(std::move(x));
        data.targets.push_back(y);
    }

    for (std::size_t k = 0; k < config.iterations; ++k) {
        const FittedGp model = refit(data, config, k);
        const AcquisitionShift shift = acquisition_shift(config.variant, config.schedule, k);
        const double f_min = *std::min_element(data.targets.begin(), data.targets.end());
        const PosteriorFn posterior = [&model](std::span<const Point> xs) {
            return model.posterior(xs);
        };
        Point x = maximize_acquisition(posterior, config.bounds, shift, f_min, acquisition_rng,
                                       config.acquisition);
        const Prediction pred = model.posterior(x);
        const double y = evaluate(x, k);

        TraceRecord rec;
        rec.iteration = trace.records.size();
        rec.x = x;
        rec.y = y;
        rec.offset = shift.mean_offset;
        rec.jitter = shift.jitter;
        rec.combined_value = combined_value(condition_mean(pred.mean, shift.mean_offset), y);
        push_record(trace, std::move(rec));
        data.points.push_back(std::move(x));
        data.targets.push_back(y);
    }
    return trace;
}

RunTrace run(const OptimizationConfig& config, const ObjectiveSpec& objective) {
    if (config.mode == Mode::decoupled_multi) return run_decoupled(config, objective);
    return run(config, make_objective(config.mode, objective));
}

std::vector<Prediction> DecoupledState::posterior(std::span<const Point> xs) const {
    if (!overage_model || !underage_model) {
        throw std::logic_error("decoupled posterior queried before both models were fitted");
    }
    const auto p1 = overage_model->posterior(xs);
    const auto p2 = underage_model->posterior(xs);
    std::vector<Prediction> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i].mean = overage_weight * p1[i].mean + underage_weight * p2[i].mean;
        const double var = overage_weight * overage_weight * p1[i].sigma * p1[i].sigma +
                           underage_weight * underage_weight * p2[i].sigma * p2[i].sigma;
        out[i].sigma = std::sqrt(var);
    }
    return out;
}

RunTrace run_decoupled(const OptimizationConfig& config, const ObjectiveSpec& objective,
                       DecoupledState* final_state) {
    config.validate();
    objective.validate();
    if (config.bounds.size() != 1) {
        throw std::invalid_argument("decoupled benchmark is one-dimensional");
    }

    SeededRng design_rng(derive_seed(config.seed, kDesignStream));
    SeededRng acquisition_rng(derive_seed(config.seed, kAcquisitionStream));

    DecoupledState state;
    state.underage_weight = objective.penalty_weight;
    Dataset overage;
    Dataset underage;
    std::vector<Point> visited;
    std::uint64_t draw_index = 0;

    RunTrace trace;
    trace.seed = config.seed;

    auto sample = [&](const Point& x) {
        SeededRng rng(derive_seed(config.seed, kEvaluationStream, draw_index++));
        return multiobjective_components(x[0], objective, rng);
    };

    for (Point& x : initial_design(config.bounds, config.initial_design_size, design_rng)) {
        const Components c = sample(x);
        state.overage_evaluations += 1;
        state.underage_evaluations += 1;
        const double y = scalarize(c, objective.penalty_weight);
        TraceRecord rec;
        rec.iteration = trace.records.size();
        rec.x = x;
        rec.y = y;
        rec.combined_value = combined_value(condition_mean(config.mean_constant, 0.0), y);
        push_record(trace, std::move(rec));
        overage.points.push_back(x);
        overage.targets.push_back(c.overage);
        underage.points.push_back(x);
        underage.targets.push_back(c.underage);
        visited.push_back(std::move(x));
    }

    const PosteriorFn posterior = [&state](std::span<const Point> xs) {
        return state.posterior(xs);
    };

    for (std::size_t k = 0; k < config.iterations; ++k) {
        state.overage_model = refit(overage, config, k, target_mean(overage));
        state.underage_model = refit(underage, config, k, target_mean(underage));

        double f_min = kInf;
        for (const auto& p : state.posterior(visited)) f_min = std::min(f_min, p.mean);

        const AcquisitionShift shift = acquisition_shift(config.variant, config.schedule, k);
        Point x = maximize_acquisition(posterior, config.bounds, shift, f_min, acquisition_rng,
                                       config.acquisition);

        const Prediction before = state.posterior(std::span<const Point>(&x, 1)).front();
        const Prediction p1 = state.overage_model->posterior(x);
        const Prediction p2 = state.underage_model->posterior(x);
        const bool evaluate_overage =
            state.overage_weight * p1.sigma >= state.underage_weight * p2.sigma;

        const Components c = sample(x);
        if (evaluate_overage) {
            overage.points.push_back(x);
            overage.targets.push_back(checked(c.overage, k));
            state.overage_model = refit(overage, config, k, target_mean(overage));
            state.overage_evaluations += 1;
        } else {
            underage.points.push_back(x);
            underage.targets.push_back(checked(c.underage, k));
            state.underage_model = refit(underage, config, k, target_mean(underage));
            state.underage_evaluations += 1;
        }

        const double y = state.posterior(std::span<const Point>(&x, 1)).front().mean;
        TraceRecord rec;
        rec.iteration = trace.records.size();
        rec.x = x;
        rec.y = y;
        rec.offset = shift.mean_offset;
        rec.jitter = shift.jitter;
        rec.combined_value = combined_value(condition_mean(before.mean, shift.mean_offset), y);
        rec.component = evaluate_overage ? 0 : 1;
        push_record(trace, std::move(rec));
        visited.push_back(std::move(x));
    }

    trace.evaluations = state.total_evaluations();
    if (final_state != nullptr) *final_state = std::move(state);
    return trace;
}

TunedHyperparameters tune_kernel_hyperparameters(std::size_t outer_iterations,
                                                 const OptimizationConfig& inner_config,
                                                 const ScalarObjective& objective) {
    if (outer_iterations < 1) throw std::invalid_argument("outer_iterations must be >= 1");
    inner_config.validate();

    const std::vector<Interval> box{kHyperparameterBox, kHyperparameterBox};
    SeededRng outer_rng(derive_seed(inner_config.seed, kTuneOuterStream));
    TunedHyperparameters result;

    auto trial = [&](const Point& hp) {
        OptimizationConfig cfg = inner_config;
        cfg.variant = Variant::original;
        cfg.kernel.variance = hp[0];
        cfg.kernel.lengthscale = hp[1];
        cfg.seed = derive_seed(inner_config.seed, kTuneInnerStream, result.trials.size());
        double score = kInf;
        try {
            score = run(cfg, objective).best_y;
        } catch (const std::exception&) {
            // counted as the worst possible score
        }
        result.trials.push_back({hp[0], hp[1], score});
    };

    const std::size_t design_n = std::min(inner_config.initial_design_size, outer_iterations);
    for (const Point& hp : initial_design(box, design_n, outer_rng)) trial(hp);

    // Outer surrogate on standardized scores; failed trials take the worst
    // finite score.
    KernelParams outer_kernel{1.0, 2.0, 1e-2, 1e-10};
    for (std::size_t t = design_n; t < outer_iterations; ++t) {
        Dataset data;
        double worst = -kInf;
        for (const auto& tr : result.trials) {
            if (std::isfinite(tr.score)) worst = std::max(worst, tr.score);
        }
        if (!std::isfinite(worst)) {
            trial(initial_design(box, 1, outer_rng).front());
            continue;
        }
        for (const auto& tr : result.trials) {
            data.points.push_back({tr.variance, tr.lengthscale});
            data.targets.push_back(std::isfinite(tr.score) ? tr.score : worst);
        }
        double mean = 0.0;
        for (double v : data.targets) mean += v;
        mean /= static_cast<double>(data.targets.size());
        double var = 0.0;
        for (double v : data.targets) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(data.targets.size()));
        for (double& v : data.targets) v = sd > 0.0 ? (v - mean) / sd : v - mean;

        const double f_min = *std::min_element(data.targets.begin(), data.targets.end());
        Point next;
        try {
            const FittedGp model = FittedGp::fit_with_escalation(data, outer_kernel, 0.0);
            next = propose_next(model, box, t, Variant::original, inner_config.schedule, f_min,
                                outer_rng, inner_config.acquisition);
        } catch (const CholeskyError&) {
            next = initial_design(box, 1, outer_rng).front();
        }
        trial(next);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trials.size(); ++i) {
        if (result.trials[i].score < result.trials[best].score) best = i;
    }
    if (!std::isfinite(result.trials[best].score)) {
        throw OptimizationError("every hyperparameter trial failed", best);
    }
    result.variance = result.trials[best].variance;
    result.lengthscale = result.trials[best].lengthscale;
    result.score = result.trials[best].score;
    return result;
}

TunedHyperparameters tune_kernel_hyperparameters(std::size_t outer_iterations,
                                                 const OptimizationConfig& inner_config,
                                                 const ObjectiveSpec& objective) {
    return tune_kernel_hyperparameters(outer_iterations, inner_config,
                                       make_objective(inner_config.mode, objective));
}

std::vector<BatchEntry> run_batch_with(std::size_t n_runs, std::uint64_t base_seed,
                                       std::size_t jobs,
                                       const std::function<RunTrace(std::uint64_t)>& runner) {
    if (n_runs < 1) throw std::invalid_argument("run_batch: n_runs must be >= 1");
    std::vector<BatchEntry> entries(n_runs);
    auto execute = [&](std::size_t i) {
        BatchEntry& e = entries[i];
        e.seed = base_seed + i;
        try {
            e.trace = runner(e.seed);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, n_runs);
    if (workers == 1) {
        for (std::size_t i = 0; i < n_runs; ++i) execute(i);
        return entries;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
                    execute(i);
                }
            });
        }
    }
    return entries;
}

std::vector<BatchEntry> run_batch(const OptimizationConfig& config,
                                  const ScalarObjective& objective, std::size_t n_runs,
                                  std::size_t jobs) {
    return run_batch_with(n_runs, config.seed, jobs, [&](std::uint64_t seed) {
        OptimizationConfig cfg = config;
        cfg.seed = seed;
        return run(cfg, objective);
    });
}

std::vector<BatchEntry> run_batch(const OptimizationConfig& config, const ObjectiveSpec& objective,
                                  std::size_t n_runs, std::size_t jobs) {
    return run_batch_with(n_runs, config.seed, jobs, [&](std::uint64_t seed) {
        OptimizationConfig cfg = config;
        cfg.seed = seed;
        return run(cfg, objective);
    });
}

}  // namespace adabo
