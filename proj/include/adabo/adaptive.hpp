#pragma once

#include <cstddef>

namespace adabo {

/// Per-iteration decay law for the mean-conditioning offset and the
/// acquisition jitter: value(i) = base / (1 + decay * i).
///
/// A decay of zero freezes the corresponding schedule at its base value.
struct AdaptiveSchedule {
    double constant_value = 0.1;
    double conditioning_decay = 0.1;
    double jitter_base = 0.01;
    double jitter_decay = 0.1;

    void validate() const;
};

double conditioning_offset(const AdaptiveSchedule& s, std::size_t iteration);
double acquisition_jitter(const AdaptiveSchedule& s, std::size_t iteration);

/// Conditioned mean m_c = mu + offset.
inline double condition_mean(double mu, double offset) { return mu + offset; }

/// Combined objective value m_c(x) + f(x), reported alongside observations.
inline double combined_value(double conditioned_mean, double observed) {
    return conditioned_mean + observed;
}

}  // namespace adabo
