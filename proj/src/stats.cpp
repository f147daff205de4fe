#include "adabo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adabo {

namespace {

constexpr double kBetaTolerance = 1e-10;
constexpr int kBetaMaxIterations = 10000;

// Lentz's method for the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kBetaTolerance) return h;
    }
    throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

void require_two(std::span<const double> xs, const char* name) {
    if (xs.size() < 2) {
        throw std::invalid_argument(std::string(name) + ": each sample needs at least 2 values");
    }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a, b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("t distribution: df must be > 0");
    if (std::isnan(t)) throw std::invalid_argument("t distribution: t is NaN");
    if (std::isinf(t)) return 0.0;
    const double p = regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return std::clamp(p, 0.0, 1.0);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double acc = 0.0;
    for (double v : xs) acc += v;
    return acc / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    require_two(xs, "variance");
    const double m = mean(xs);
    double acc = 0.0;
    for (double v : xs) acc += (v - m) * (v - m);
    return acc / static_cast<double>(xs.size() - 1);
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
    require_two(a, "welch_t");
    require_two(b, "welch_t");
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    const double se2 = va + vb;
    if (!(se2 > 0.0)) {
        throw UndefinedStatisticError("welch_t: both samples have zero variance");
    }
    TTestResult r;
    r.t = (mean(a) - mean(b)) / std::sqrt(se2);
    r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    require_two(a, "cohens_d");
    require_two(b, "cohens_d");
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    const double pooled =
        std::sqrt(((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) /
                  (na + nb - 2.0));
    if (!(pooled > 0.0)) throw UndefinedStatisticError("cohens_d: zero pooled standard deviation");
    return (mean(a) - mean(b)) / pooled;
}

double hedges_g(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size() + b.size());
    if (n <= 3.0) throw std::invalid_argument("hedges_g: requires n_a + n_b > 3");
    return cohens_d(a, b) * (1.0 - 3.0 / (4.0 * n - 9.0));
}

double cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("cliffs_delta: empty sample");
    std::vector<double> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    long long greater = 0;
    long long less = 0;
    for (double v : a) {
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
        const auto hi = std::upper_bound(lo, sorted.end(), v);
        greater += lo - sorted.begin();
        less += sorted.end() - hi;
    }
    return static_cast<double>(greater - less) /
           (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::vector<double> best_so_far(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("best_so_far: empty input");
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i - 1], out[i]);
    return out;
}

std::vector<double> improvement_rate(std::span<const double> best) {
    if (best.size() < 2) throw std::invalid_argument("improvement_rate: need at least 2 values");
    std::vector<double> out(best.size() - 1);
    for (std::size_t i = 0; i + 1 < best.size(); ++i) out[i] = best[i + 1] - best[i];
    return out;
}

std::vector<double> cumulative_distribution(std::size_t n) {
    if (n < 1) throw std::invalid_argument("cumulative_distribution: n must be >= 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
    return out;
}

ComparisonReport compare(std::span<const double> a, std::span<const double> b,
                         std::string label_a, std::string label_b) {
    ComparisonReport r;
    r.label_a = std::move(label_a);
    r.label_b = std::move(label_b);
    r.n_a = a.size();
    r.n_b = b.size();
    const TTestResult t = welch_t(a, b);
    r.t_stat = t.t;
    r.p_value = t.p;
    r.df = t.df;
    r.cohens_d = cohens_d(a, b);
    r.hedges_g = hedges_g(a, b);
    r.cliffs_delta = cliffs_delta(a, b);
    return r;
}

StabilityTable stability_check(const OptimizationConfig& config,
                               const std::function<RunTrace(const OptimizationConfig&)>& runner,
                               std::span<const std::size_t> run_counts,
                               const StabilitySeeds& seeds, std::size_t jobs) {
    if (run_counts.empty()) throw std::invalid_argument("stability: no run counts given");
    for (std::size_t n : run_counts) {
        if (n < 2) throw std::invalid_argument("stability: every run count must be >= 2");
        const bool overlap = seeds.seed_a < seeds.seed_b + n && seeds.seed_b < seeds.seed_a + n;
        if (overlap) {
            throw std::invalid_argument("stability: batch seed ranges overlap for run count " +
                                        std::to_string(n));
        }
    }

    auto finals = [&](std::uint64_t base, std::size_t n) {
        const auto entries = run_batch_with(n, base, jobs, [&](std::uint64_t seed) {
            OptimizationConfig cfg = config;
            cfg.seed = seed;
            return runner(cfg);
        });
        std::vector<double> out;
        out.reserve(n);
        for (const auto& e : entries) {
            if (!e.ok()) {
                throw std::runtime_error("stability: run with seed " + std::to_string(e.seed) +
                                         " failed: " + e.error);
            }
            out.push_back(e.trace->best_y);
        }
        return out;
    };

    StabilityTable table;
    for (std::size_t n : run_counts) {
        const auto a = finals(seeds.seed_a, n);
        const auto b = finals(seeds.seed_b, n);
        const TTestResult t = welch_t(a, b);
        table.rows.push_back({to_string(config.variant), to_string(config.mode), n, t.t, t.p});
    }
    return table;
}

StabilityTable stability_check(const OptimizationConfig& config, const ObjectiveSpec& objective,
                               std::span<const std::size_t> run_counts,
                               const StabilitySeeds& seeds, std::size_t jobs) {
    return stability_check(
        config, [&](const OptimizationConfig& cfg) { return run(cfg, objective); }, run_counts,
        seeds, jobs);
}

}  // namespace adabo
