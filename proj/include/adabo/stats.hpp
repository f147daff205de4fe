#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adabo/optimizer.hpp"

namespace adabo {

/// A statistic that is undefined for the given samples (e.g. zero variance).
class UndefinedStatisticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// Regularized incomplete beta I_x(a, b), continued fraction with
/// absolute tolerance 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> xs);
/// Sample variance, n - 1 denominator.
double sample_variance(std::span<const double> xs);

/// Welch's unequal-variance t-test with Welch-Satterthwaite df.
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

/// Mean difference over the pooled (n - 1) standard deviation.
double cohens_d(std::span<const double> a, std::span<const double> b);

/// Cohen's d times 1 - 3 / (4 (n_a + n_b) - 9).
double hedges_g(std::span<const double> a, std::span<const double> b);

/// (#{a_i > b_j} - #{a_i < b_j}) / (n_a n_b), counted by sorted merge.
double cliffs_delta(std::span<const double> a, std::span<const double> b);

/// Running minimum.
std::vector<double> best_so_far(std::span<const double> values);

/// First differences best[i + 1] - best[i].
std::vector<double> improvement_rate(std::span<const double> best);

/// [1/n, 2/n, ..., 1].
std::vector<double> cumulative_distribution(std::size_t n);

struct ComparisonReport {
    std::string label_a;
    std::string label_b;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double df = 0.0;
    double cohens_d = 0.0;
    double hedges_g = 0.0;
    double cliffs_delta = 0.0;
};

ComparisonReport compare(std::span<const double> a, std::span<const double> b,
                         std::string label_a = "a", std::string label_b = "b");

struct StabilityRow {
    std::string variant;
    std::string mode;
    std::size_t run_count = 0;
    double t_stat = 0.0;
    double p_value = 1.0;

    [[nodiscard]] bool stable() const { return p_value > 0.05; }
};

struct StabilityTable {
    std::vector<StabilityRow> rows;
};

/// How the two batches of a stability check are seeded: batch A uses
/// seed_a + i and batch B seed_b + i for i < run_count. The ranges must not
/// overlap.
struct StabilitySeeds {
    std::uint64_t seed_a = 0;
    std::uint64_t seed_b = 1000000;
};

/// For each run count, Welch-tests the final best values of two
/// independently seeded batches of that size.
StabilityTable stability_check(const OptimizationConfig& config,
                               const std::function<RunTrace(const OptimizationConfig&)>& runner,
                               std::span<const std::size_t> run_counts,
                               const StabilitySeeds& seeds, std::size_t jobs = 1);
StabilityTable stability_check(const OptimizationConfig& config, const ObjectiveSpec& objective,
                               std::span<const std::size_t> run_counts,
                               const StabilitySeeds& seeds, std::size_t jobs = 1);

}  // namespace adabo
