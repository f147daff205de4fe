#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adabo {

/// A point in the search domain.
using Point = std::vector<double>;

/// Closed interval [lower, upper] for one input dimension.
struct Interval {
    double lower = -5.0;
    double upper = 5.0;

    [[nodiscard]] double width() const { return upper - lower; }
    [[nodiscard]] bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Throws std::invalid_argument unless every interval is finite with lower < upper.
void validate_bounds(std::span<const Interval> bounds);

}  // namespace adabo
