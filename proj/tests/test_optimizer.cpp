#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "adabo/optimizer.hpp"

using namespace adabo;

namespace {

constexpr double kOptimumX = 0.664822263881063;
constexpr double kOptimumY = 0.1799676535187149;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quadratic(std::span<const double> x, std::uint64_t) {
    double acc = 0.0;
    for (double v : x) acc += (v - 1.0) * (v - 1.0);
    return acc;
}

OptimizationConfig small_config(std::uint64_t seed = 0) {
    OptimizationConfig c;
    c.iterations = 6;
    c.initial_design_size = 3;
    c.acquisition.candidates = 256;
    c.seed = seed;
    return c;
}

void expect_same_trace(const RunTrace& a, const RunTrace& b) {
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].x, b.records[i].x) << "record " << i;
        EXPECT_EQ(a.records[i].y, b.records[i].y) << "record " << i;
        EXPECT_EQ(a.records[i].best_so_far, b.records[i].best_so_far) << "record " << i;
    }
    EXPECT_EQ(a.best_x, b.best_x);
    EXPECT_EQ(a.best_y, b.best_y);
}

}  // namespace

TEST(InitialDesign, DeterministicPerSeed) {
    const std::vector<Interval> box{{-5.0, 5.0}};
    SeededRng a(4);
    SeededRng b(4);
    EXPECT_EQ(initial_design(box, 5, a), initial_design(box, 5, b));
}

TEST(InitialDesign, UniformWithinBounds) {
    const std::vector<Interval> box{{-5.0, 5.0}, {0.0, 1.0}};
    SeededRng rng(6);
    const auto pts = initial_design(box, 1000, rng);
    double s = 0.0;
    for (const auto& p : pts) {
        ASSERT_TRUE(box[0].contains(p[0]));
        ASSERT_TRUE(box[1].contains(p[1]));
        s += p[0];
    }
    EXPECT_NEAR(s / 1000.0, 0.0, 0.3);
    EXPECT_THROW(initial_design(box, 0, rng), std::invalid_argument);
}

TEST(OptimizationConfig, Validation) {
    OptimizationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.iterations = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.initial_design_size = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.bounds = {Interval{0.0, 0.0}};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Run, RecordCountAndBudget) {
    OptimizationConfig c = small_config();
    c.iterations = 1;
    const auto t = run(c, ObjectiveSpec{});
    EXPECT_EQ(t.records.size(), c.initial_design_size + 1);
    EXPECT_EQ(t.evaluations, c.initial_design_size + 1);

    c.iterations = 7;
    c.mode = Mode::combined_multi;
    const auto m = run(c, ObjectiveSpec{});
    EXPECT_EQ(m.records.size(), 10u);
    EXPECT_EQ(m.evaluations, 10u);
}

TEST(Run, BestSoFarIsRunningMinimum) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = run(small_config(seed), ObjectiveSpec{});
        double best = INFINITY;
        for (const auto& r : t.records) {
            best = std::min(best, r.y);
            EXPECT_EQ(r.best_so_far, best);
        }
        EXPECT_EQ(t.best_y, best);
    }
}

TEST(Run, RecordsCarryScheduleValues) {
    const OptimizationConfig c = small_config();
    const auto t = run(c, ObjectiveSpec{});
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        const auto& r = t.records[i];
        EXPECT_EQ(r.iteration, i);
        if (i < c.initial_design_size) {
            EXPECT_EQ(r.offset, 0.0);
            EXPECT_EQ(r.jitter, 0.0);
        } else {
            const std::size_t k = i - c.initial_design_size;
            EXPECT_EQ(r.offset, conditioning_offset(c.schedule, k));
            EXPECT_EQ(r.jitter, acquisition_jitter(c.schedule, k));
        }
    }
}

TEST(Run, DeterministicPerSeed) {
    expect_same_trace(run(small_config(12), ObjectiveSpec{}), run(small_config(12), ObjectiveSpec{}));
}

TEST(Run, CombinedModeMatchesSingleMode) {
    OptimizationConfig single = small_config(3);
    OptimizationConfig combined = single;
    combined.mode = Mode::combined_multi;
    expect_same_trace(run(single, ObjectiveSpec{}), run(combined, ObjectiveSpec{}));
}

TEST(Run, AdaptiveDegeneratesToOriginal) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        OptimizationConfig a = small_config(seed);
        a.schedule.constant_value = 0.0;
        a.schedule.jitter_decay = 0.0;
        OptimizationConfig o = a;
        a.variant = Variant::adaptive;
        o.variant = Variant::original;
        expect_same_trace(run(a, ObjectiveSpec{}), run(o, ObjectiveSpec{}));
    }
}

TEST(Run, NonFiniteObjectiveAbortsWithIteration) {
    OptimizationConfig c = small_config();
    int calls = 0;
    const ScalarObjective bad = [&](std::span<const double>, std::uint64_t) {
        return ++calls > 4 ? NAN : 1.0;
    };
    try {
        (void)run(c, bad);
        FAIL() << "expected OptimizationError";
    } catch (const OptimizationError& e) {
        EXPECT_EQ(e.iteration(), 1u);
    }
}

TEST(Run, ConvergesOnRobustBenchmark) {
    std::vector<double> ys;
    std::vector<double> xs;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizationConfig c;
        c.seed = seed;
        const auto t = run(c, ObjectiveSpec{});
        ys.push_back(t.best_y);
        xs.push_back(t.best_x[0]);
    }
    EXPECT_NEAR(median(ys), kOptimumY, 0.05);
    EXPECT_NEAR(median(xs), kOptimumX, 0.4);
}

TEST(Run, ConvergesOnQuadratic) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizationConfig c;
        c.kernel.noise_variance = 1e-8;
        c.seed = seed;
        hits += run(c, quadratic).best_y <= 1e-2;
    }
    EXPECT_GE(hits, 18);
}

TEST(Decoupled, BudgetAccounting) {
    OptimizationConfig c = small_config(1);
    c.mode = Mode::decoupled_multi;
    DecoupledState state;
    const auto t = run_decoupled(c, ObjectiveSpec{}, &state);
    EXPECT_EQ(t.records.size(), c.initial_design_size + c.iterations);
    EXPECT_EQ(t.evaluations, 2 * c.initial_design_size + c.iterations);
    EXPECT_EQ(state.total_evaluations(), t.evaluations);
    std::size_t f1 = 0;
    std::size_t f2 = 0;
    for (std::size_t i = c.initial_design_size; i < t.records.size(); ++i) {
        (t.records[i].component == 0 ? f1 : f2) += 1;
    }
    EXPECT_EQ(state.overage_evaluations, c.initial_design_size + f1);
    EXPECT_EQ(state.underage_evaluations, c.initial_design_size + f2);
    double best = INFINITY;
    for (const auto& r : t.records) {
        best = std::min(best, r.y);
        EXPECT_EQ(r.best_so_far, best);
    }
}

TEST(Decoupled, RunDispatchesOnMode) {
    OptimizationConfig c = small_config(2);
    c.mode = Mode::decoupled_multi;
    expect_same_trace(run(c, ObjectiveSpec{}), run_decoupled(c, ObjectiveSpec{}));
    EXPECT_THROW((void)run(c, ScalarObjective(quadratic)), std::invalid_argument);
}

TEST(Decoupled, ScalarPosteriorCombinesComponents) {
    OptimizationConfig c = small_config(4);
    c.mode = Mode::decoupled_multi;
    DecoupledState state;
    (void)run_decoupled(c, ObjectiveSpec{}, &state);
    const std::vector<Point> xs{{-2.0}, {0.3}, {4.0}};
    const auto joint = state.posterior(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto p1 = state.overage_model->posterior(xs[i]);
        const auto p2 = state.underage_model->posterior(xs[i]);
        const double w = state.underage_weight;
        EXPECT_NEAR(joint[i].mean, p1.mean + w * p2.mean, 1e-14);
        EXPECT_NEAR(joint[i].sigma * joint[i].sigma,
                    p1.sigma * p1.sigma + w * w * p2.sigma * p2.sigma, 1e-14);
    }
}

TEST(Decoupled, ComponentUpdateOnlyShrinksItsOwnVariance) {
    ObjectiveSpec spec{};
    KernelParams kp{};
    Dataset f1{{{-1.0}, {2.0}}, {0.1, 1.0}};
    Dataset f2{{{-1.0}, {2.0}}, {3.0, 0.5}};
    const auto m1 = FittedGp::fit(f1, kp);
    const auto m2 = FittedGp::fit(f2, kp);
    const Point x{0.6};
    f1.points.push_back(x);
    f1.targets.push_back(0.2);
    const auto m1_after = FittedGp::fit(f1, kp);
    EXPECT_LT(m1_after.posterior(x).sigma, m1.posterior(x).sigma);
    EXPECT_EQ(m2.posterior(x).sigma, FittedGp::fit(f2, kp).posterior(x).sigma);
    (void)spec;
}

TEST(Decoupled, ConvergesTowardAnalyticOptimum) {
    std::vector<double> dist;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizationConfig c;
        c.mode = Mode::decoupled_multi;
        c.seed = seed;
        dist.push_back(std::abs(run_decoupled(c, ObjectiveSpec{}).best_x[0] - kOptimumX));
    }
    EXPECT_LE(median(dist), 0.6);
}

TEST(Tune, SingleOuterIterationReturnsThatPair) {
    OptimizationConfig inner = small_config(5);
    const auto r = tune_kernel_hyperparameters(1, inner, ObjectiveSpec{});
    ASSERT_EQ(r.trials.size(), 1u);
    EXPECT_EQ(r.variance, r.trials[0].variance);
    EXPECT_EQ(r.lengthscale, r.trials[0].lengthscale);
    EXPECT_EQ(r.score, r.trials[0].score);
}

TEST(Tune, ReturnsMinimumScoreInsideBox) {
    OptimizationConfig inner = small_config(6);
    const auto r = tune_kernel_hyperparameters(8, inner, ObjectiveSpec{});
    ASSERT_EQ(r.trials.size(), 8u);
    double best = INFINITY;
    for (const auto& t : r.trials) {
        best = std::min(best, t.score);
        EXPECT_TRUE(kHyperparameterBox.contains(t.variance));
        EXPECT_TRUE(kHyperparameterBox.contains(t.lengthscale));
    }
    EXPECT_EQ(r.score, best);
}

TEST(Tune, FailedInnerRunsScoreWorst) {
    OptimizationConfig inner = small_config(7);
    std::atomic<int> calls = 0;
    const ScalarObjective flaky = [&](std::span<const double> x, std::uint64_t) {
        // The first inner run fails at its first evaluation.
        return calls++ == 0 ? NAN : quadratic(x, 0);
    };
    const auto r = tune_kernel_hyperparameters(3, inner, flaky);
    EXPECT_TRUE(std::isinf(r.trials[0].score));
    EXPECT_TRUE(std::isfinite(r.score));
}

TEST(Tune, BeatsRandomPairBaseline) {
    OptimizationConfig inner;
    inner.seed = 11;
    const auto tuned = tune_kernel_hyperparameters(30, inner, ObjectiveSpec{});

    SeededRng rng(derive_seed(11, 99));
    std::vector<double> baseline;
    for (int i = 0; i < 10; ++i) {
        OptimizationConfig c = inner;
        c.variant = Variant::original;
        c.kernel.variance = rng.uniform(kHyperparameterBox.lower, kHyperparameterBox.upper);
        c.kernel.lengthscale = rng.uniform(kHyperparameterBox.lower, kHyperparameterBox.upper);
        c.seed = derive_seed(11, 98, static_cast<std::uint64_t>(i));
        baseline.push_back(run(c, ObjectiveSpec{}).best_y);
    }
    EXPECT_LE(tuned.score, median(baseline));
}

TEST(RunBatch, SingleRunEqualsRun) {
    const OptimizationConfig c = small_config(40);
    const auto batch = run_batch(c, ObjectiveSpec{}, 1);
    ASSERT_EQ(batch.size(), 1u);
    ASSERT_TRUE(batch[0].ok());
    EXPECT_EQ(batch[0].seed, 40u);
    expect_same_trace(*batch[0].trace, run(c, ObjectiveSpec{}));
}

TEST(RunBatch, DistinctSeedsGiveDistinctTraces) {
    const auto batch = run_batch(small_config(0), ObjectiveSpec{}, 6);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        EXPECT_EQ(batch[i].seed, i);
        for (std::size_t j = i + 1; j < batch.size(); ++j) {
            EXPECT_NE(batch[i].trace->records.back().x, batch[j].trace->records.back().x);
        }
    }
}

TEST(RunBatch, ConcurrencyDoesNotChangeResults) {
    const OptimizationConfig c = small_config(100);
    const auto serial = run_batch(c, ObjectiveSpec{}, 8, 1);
    const auto parallel = run_batch(c, ObjectiveSpec{}, 8, 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].seed, parallel[i].seed);
        expect_same_trace(*serial[i].trace, *parallel[i].trace);
    }
}

TEST(RunBatch, FailuresAreRecordedPerRun) {
    const ScalarObjective fails_on_seed_two = [](std::span<const double> x, std::uint64_t seed) {
        return seed == derive_seed(2, 3, 0) ? NAN : quadratic(x, seed);
    };
    const auto batch = run_batch(small_config(0), fails_on_seed_two, 4, 2);
    ASSERT_EQ(batch.size(), 4u);
    EXPECT_TRUE(batch[0].ok());
    EXPECT_TRUE(batch[1].ok());
    EXPECT_FALSE(batch[2].ok());
    EXPECT_FALSE(batch[2].error.empty());
    EXPECT_TRUE(batch[3].ok());
}
