#include "adabo/objectives.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adabo {

void ObjectiveSpec::validate() const {
    if (!std::isfinite(threshold)) throw std::invalid_argument("objective threshold must be finite");
    if (!std::isfinite(penalty_weight) || penalty_weight < 0.0) {
        throw std::invalid_argument("objective penalty_weight must be non-negative");
    }
    if (sample_count < 1) throw std::invalid_argument("objective sample_count must be >= 1");
    if (!std::isfinite(demand_sd) || demand_sd <= 0.0) {
        throw std::invalid_argument("objective demand_sd must be positive");
    }
    validate_bounds(bounds);
}

double standard_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double standard_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::vector<double> demand_samples(double x, const ObjectiveSpec& spec, SeededRng& rng) {
    if (!std::isfinite(x)) throw std::invalid_argument("demand_samples: x must be finite");
    std::vector<double> out(spec.sample_count);
    for (auto& d : out) d = rng.normal(x, spec.demand_sd);
    return out;
}

Components components_from_samples(std::span<const double> samples, double threshold) {
    if (samples.empty()) throw std::invalid_argument("components: no samples");
    double over = 0.0;
    double under = 0.0;
    for (double d : samples) {
        over += std::max(d - threshold, 0.0);
        under += std::max(threshold - d, 0.0);
    }
    const auto n = static_cast<double>(samples.size());
    return {over / n, under / n};
}

Components multiobjective_components(double x, const ObjectiveSpec& spec, SeededRng& rng) {
    const auto samples = demand_samples(x, spec, rng);
    return components_from_samples(samples, spec.threshold);
}

double stochastic_profit(double x, const ObjectiveSpec& spec, SeededRng& rng) {
    return -multiobjective_components(x, spec, rng).overage;
}

double penalty_term(double x, const ObjectiveSpec& spec, SeededRng& rng) {
    return spec.penalty_weight * multiobjective_components(x, spec, rng).underage;
}

double robust_objective(double x, const ObjectiveSpec& spec, SeededRng& rng) {
    const Components c = multiobjective_components(x, spec, rng);
    const double profit = -c.overage;
    const double penalty = spec.penalty_weight * c.underage;
    return profit - penalty;
}

double analytic_expected_robust(double x, const ObjectiveSpec& spec) {
    const double sd = spec.demand_sd;
    const double a = (x - spec.threshold) / sd;
    const double pdf = standard_normal_pdf(a);
    // E[max(D - t, 0)] and E[max(t - D, 0)] for D ~ N(x, sd^2).
    const double over = sd * (pdf + a * standard_normal_cdf(a));
    const double under = sd * (pdf - a * standard_normal_cdf(-a));
    return -over - spec.penalty_weight * under;
}

}  // namespace adabo
