#include <gtest/gtest.h>

#include <cmath>

#include "adabo/objectives.hpp"
#include "adabo/rng.hpp"

using namespace adabo;

namespace {

constexpr double kPhi0 = 0.398942280401432678;

// Four standard errors of a 1000-sample mean at x = threshold, from the
// second moments E[max(Z, 0)^2] = 1/2 and E[(max(Z, 0) + w max(-Z, 0))^2] = (1 + w^2) / 2.
const double kOverageTol = 4.0 * std::sqrt((0.5 - kPhi0 * kPhi0) / 1000.0);
const double kRobustTol = 4.0 * std::sqrt((0.505 - 1.21 * kPhi0 * kPhi0) / 1000.0);

}  // namespace

TEST(SeededRng, SameSeedSameStream) {
    SeededRng a(42);
    SeededRng b(42);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
        EXPECT_EQ(a.normal(), b.normal());
    }
}

TEST(SeededRng, FirstOutputIsStandardMt19937_64) {
    // Default-seeded mt19937_64: the 10000th output is fixed by the standard.
    SeededRng r(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = r.next_u64();
    EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(SeededRng, UniformRange) {
    SeededRng r(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double w = r.uniform(-2.0, 3.0);
        ASSERT_GE(w, -2.0);
        ASSERT_LT(w, 3.0);
    }
}

TEST(SeededRng, NormalMoments) {
    SeededRng r(9);
    const int n = 1000000;
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(DeriveSeed, DistinctStreamsAndIndices) {
    EXPECT_EQ(derive_seed(7, 1, 3), derive_seed(7, 1, 3));
    EXPECT_NE(derive_seed(7, 1, 3), derive_seed(7, 2, 3));
    EXPECT_NE(derive_seed(7, 1, 3), derive_seed(7, 1, 4));
    EXPECT_NE(derive_seed(7, 1, 3), derive_seed(8, 1, 3));
}

TEST(DemandSamples, DeterministicForFreshRng) {
    const ObjectiveSpec spec{};
    SeededRng a(123);
    SeededRng b(123);
    EXPECT_EQ(demand_samples(0.4, spec, a), demand_samples(0.4, spec, b));
}

TEST(DemandSamples, LawOfLargeNumbers) {
    ObjectiveSpec spec{};
    spec.sample_count = 1000000;
    SeededRng rng(2024);
    const auto d = demand_samples(2.0, spec, rng);
    ASSERT_EQ(d.size(), 1000000u);
    double s = 0.0;
    for (double v : d) s += v;
    EXPECT_NEAR(s / static_cast<double>(d.size()), 2.0, 0.01);
}

TEST(DemandSamples, DegenerateSpread) {
    ObjectiveSpec spec{};
    spec.demand_sd = 1e-9;
    SeededRng rng(3);
    for (double v : demand_samples(-1.5, spec, rng)) EXPECT_NEAR(v, -1.5, 1e-6);
}

TEST(DemandSamples, RejectsNonFiniteX) {
    SeededRng rng(3);
    EXPECT_THROW(demand_samples(NAN, ObjectiveSpec{}, rng), std::invalid_argument);
}

TEST(StochasticProfit, MonteCarloErrorMatchesStandardError) {
    const ObjectiveSpec spec{};
    const double se = kOverageTol / 4.0;
    int within = 0;
    const int seeds = 2000;
    for (int i = 0; i < seeds; ++i) {
        SeededRng rng(derive_seed(5, 0, static_cast<std::uint64_t>(i)));
        within += std::abs(stochastic_profit(2.0, spec, rng) + kPhi0) < se;
    }
    // P(|Z| < 1) = 0.6827
    EXPECT_NEAR(static_cast<double>(within) / seeds, 0.6827, 0.04);
}

TEST(StochasticProfit, Examples) {
    const ObjectiveSpec spec{};
    SeededRng r1(11);
    EXPECT_LT(std::abs(stochastic_profit(-10.0, spec, r1)), 1e-6);
    SeededRng r2(12);
    EXPECT_NEAR(stochastic_profit(2.0, spec, r2), -kPhi0, kOverageTol);
    SeededRng r3(13);
    EXPECT_NEAR(stochastic_profit(12.0, spec, r3), -10.0, 0.1);
}

TEST(PenaltyTerm, Examples) {
    ObjectiveSpec spec{};
    SeededRng r1(21);
    EXPECT_LT(penalty_term(12.0, spec, r1), 1e-6);
    SeededRng r2(22);
    EXPECT_NEAR(penalty_term(2.0, spec, r2), 0.1 * kPhi0, 0.1 * kOverageTol);
    spec.penalty_weight = 0.0;
    SeededRng r3(23);
    EXPECT_EQ(penalty_term(-3.0, spec, r3), 0.0);
}

TEST(RobustObjective, Examples) {
    ObjectiveSpec spec{};
    SeededRng r1(31);
    EXPECT_NEAR(robust_objective(2.0, spec, r1), -1.1 * kPhi0, kRobustTol);
    SeededRng r2(32);
    EXPECT_NEAR(robust_objective(0.664822263881063, spec, r2), -0.180, 0.02);
    spec.penalty_weight = 0.0;
    SeededRng r3(33);
    EXPECT_LT(std::abs(robust_objective(-10.0, spec, r3)), 1e-6);
}

TEST(RobustObjective, SignContracts) {
    const ObjectiveSpec spec{};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const double x = -5.0 + 0.2 * static_cast<double>(seed);
        SeededRng a(seed);
        SeededRng b(seed);
        SeededRng c(seed);
        EXPECT_LE(stochastic_profit(x, spec, a), 0.0);
        EXPECT_GE(penalty_term(x, spec, b), 0.0);
        const auto comp = multiobjective_components(x, spec, c);
        EXPECT_GE(comp.overage, 0.0);
        EXPECT_GE(comp.underage, 0.0);
    }
}

TEST(RobustObjective, DecompositionIdentityIsExact) {
    ObjectiveSpec spec{};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        spec.penalty_weight = 0.05 * static_cast<double>(seed % 7);
        const double x = -5.0 + 0.05 * static_cast<double>(seed);
        SeededRng a(seed);
        SeededRng b(seed);
        const double r = robust_objective(x, spec, a);
        const auto c = multiobjective_components(x, spec, b);
        EXPECT_EQ(r, -scalarize(c, spec.penalty_weight));
    }
}

TEST(RobustObjective, ProfitAndPenaltyShareSamples) {
    const ObjectiveSpec spec{};
    SeededRng a(77);
    SeededRng b(77);
    SeededRng c(77);
    const double profit = stochastic_profit(1.3, spec, a);
    const double penalty = penalty_term(1.3, spec, b);
    EXPECT_EQ(robust_objective(1.3, spec, c), profit - penalty);
}

TEST(RobustObjective, PureFunctionOfSeed) {
    const ObjectiveSpec spec{};
    SeededRng a(5);
    SeededRng b(5);
    EXPECT_EQ(robust_objective(0.3, spec, a), robust_objective(0.3, spec, b));
}

TEST(AnalyticExpectedRobust, ReferenceValues) {
    const ObjectiveSpec spec{};
    // scipy.stats.norm at double precision.
    EXPECT_NEAR(analytic_expected_robust(2.0, spec), -0.43883650844157596, 1e-12);
    EXPECT_NEAR(analytic_expected_robust(0.0, spec), -0.20933977287851263, 1e-12);
    EXPECT_NEAR(analytic_expected_robust(1.0, spec), -0.19164701764645492, 1e-12);
    EXPECT_NEAR(analytic_expected_robust(3.0, spec), -1.091647017646455, 1e-12);
}

TEST(AnalyticExpectedRobust, MaximumAtKnownRoot) {
    const ObjectiveSpec spec{};
    const double x_star = 0.664822263881063;  // Phi(x - 2) = 1/11
    EXPECT_NEAR(analytic_expected_robust(x_star, spec), -0.1799676535187149, 1e-12);
    for (double x = -5.0; x <= 5.0; x += 0.001) {
        EXPECT_LE(analytic_expected_robust(x, spec), analytic_expected_robust(x_star, spec) + 1e-15);
    }
}

TEST(AnalyticExpectedRobust, AsymptoticallyLinearBelowThreshold) {
    const ObjectiveSpec spec{};
    for (double x : {-20.0, -50.0, -100.0}) {
        EXPECT_NEAR(analytic_expected_robust(x, spec), -0.1 * (2.0 - x), 1e-12);
    }
}

TEST(AnalyticExpectedRobust, MonteCarloConvergence) {
    const ObjectiveSpec spec{};
    const int k = 1000;  // k * sample_count = 1e6 draws
    for (double x : {0.0, 1.0, 2.0, 3.0}) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            SeededRng rng(derive_seed(99, 0, static_cast<std::uint64_t>(i)));
            acc += robust_objective(x, spec, rng);
        }
        EXPECT_NEAR(acc / k, analytic_expected_robust(x, spec), 0.005) << "x = " << x;
    }
}

TEST(MultiobjectiveComponents, Examples) {
    const ObjectiveSpec spec{};
    SeededRng r1(41);
    const auto far = multiobjective_components(-10.0, spec, r1);
    EXPECT_NEAR(far.overage, 0.0, 0.1);
    EXPECT_NEAR(far.underage, 12.0, 0.1);
    SeededRng r2(42);
    const auto mid = multiobjective_components(2.0, spec, r2);
    EXPECT_NEAR(mid.overage, kPhi0, kOverageTol);
    EXPECT_NEAR(mid.underage, kPhi0, kOverageTol);
}

TEST(ObjectiveSpec, Validation) {
    ObjectiveSpec s{};
    EXPECT_NO_THROW(s.validate());
    s.sample_count = 0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    s.demand_sd = 0.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    s.penalty_weight = -0.1;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = {};
    s.bounds = {Interval{1.0, 1.0}};
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(StandardNormal, ReferenceValues) {
    EXPECT_NEAR(standard_normal_pdf(0.0), kPhi0, 1e-16);
    EXPECT_NEAR(standard_normal_cdf(0.0), 0.5, 1e-16);
    EXPECT_NEAR(standard_normal_cdf(1.959963984540054), 0.975, 1e-14);
    EXPECT_NEAR(standard_normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
}
