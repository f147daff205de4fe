#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adabo/rng.hpp"
#include "adabo/types.hpp"

namespace adabo {

/// Thresholded stochastic demand objective.
///
/// Demand at decision x is Normal(x, demand_sd). Overage is
/// max(d - threshold, 0) and underage max(threshold - d, 0); each evaluation
/// averages them over `sample_count` draws from one shared sample set.
struct ObjectiveSpec {
    double threshold = 2.0;
    double penalty_weight = 0.1;
    std::size_t sample_count = 1000;
    double demand_sd = 1.0;
    std::vector<Interval> bounds{Interval{-5.0, 5.0}};

    void validate() const;
};

/// Mean overage (f1) and mean underage (f2) over one sample set.
struct Components {
    double overage = 0.0;
    double underage = 0.0;
};

std::vector<double> demand_samples(double x, const ObjectiveSpec& spec, SeededRng& rng);

Components components_from_samples(std::span<const double> samples, double threshold);

/// -mean overage; always <= 0.
double stochastic_profit(double x, const ObjectiveSpec& spec, SeededRng& rng);

/// penalty_weight * mean underage; always >= 0.
double penalty_term(double x, const ObjectiveSpec& spec, SeededRng& rng);

/// Profit minus penalty on a single draw of demand samples. Equals
/// -(f1 + penalty_weight * f2) bit for bit on the same samples.
double robust_objective(double x, const ObjectiveSpec& spec, SeededRng& rng);

/// Closed-form expectation of robust_objective under the demand model.
double analytic_expected_robust(double x, const ObjectiveSpec& spec);

/// (f1, f2) for the decoupled two-objective form of the robust objective.
Components multiobjective_components(double x, const ObjectiveSpec& spec, SeededRng& rng);

/// Scalarization f1 + w f2, the minimization form of the robust objective.
inline double scalarize(const Components& c, double penalty_weight) {
    return c.overage + penalty_weight * c.underage;
}

double standard_normal_pdf(double z);
double standard_normal_cdf(double z);

}  // namespace adabo
