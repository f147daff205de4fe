#include "adabo/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace adabo {

void AdaptiveSchedule::validate() const {
    if (!std::isfinite(constant_value)) {
        throw std::invalid_argument("schedule constant_value must be finite");
    }
    if (!std::isfinite(conditioning_decay) || conditioning_decay < 0.0) {
        throw std::invalid_argument("schedule conditioning_decay must be non-negative");
    }
    if (!std::isfinite(jitter_base) || jitter_base <= 0.0) {
        throw std::invalid_argument("schedule jitter_base must be positive");
    }
    if (!std::isfinite(jitter_decay) || jitter_decay < 0.0) {
        throw std::invalid_argument("schedule jitter_decay must be non-negative");
    }
}

double conditioning_offset(const AdaptiveSchedule& s, std::size_t iteration) {
    return s.constant_value / (1.0 + s.conditioning_decay * static_cast<double>(iteration));
}

double acquisition_jitter(const AdaptiveSchedule& s, std::size_t iteration) {
    return s.jitter_base / (1.0 + s.jitter_decay * static_cast<double>(iteration));
}

}  // namespace adabo
