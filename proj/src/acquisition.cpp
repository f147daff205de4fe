#include "adabo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "adabo/objectives.hpp"

namespace adabo {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1 / golden ratio

void require_finite(const AcquisitionQuery& q) {
    if (!std::isfinite(q.mu) || !std::isfinite(q.sigma) || !std::isfinite(q.f_min) ||
        !std::isfinite(q.jitter)) {
        throw std::invalid_argument("expected improvement: non-finite input");
    }
    if (q.sigma < 0.0) throw std::invalid_argument("expected improvement: negative sigma");
    if (q.jitter < 0.0) throw std::invalid_argument("expected improvement: negative jitter");
}

}  // namespace

double expected_improvement(const AcquisitionQuery& q) {
    require_finite(q);
    const double gap = q.f_min - q.mu - q.jitter;
    if (q.sigma == 0.0) return std::max(gap, 0.0);
    const double z = gap / q.sigma;
    const double ei = gap * standard_normal_cdf(z) + q.sigma * standard_normal_pdf(z);
    return std::max(ei, 0.0);
}

double expected_improvement_numeric(const AcquisitionQuery& q, std::size_t grid_points) {
    require_finite(q);
    if (q.sigma == 0.0) throw std::invalid_argument("numeric EI requires sigma > 0");
    if (grid_points < 2) throw std::invalid_argument("numeric EI requires at least 2 intervals");

    const double lo = q.mu - 8.0 * q.sigma;
    const double hi = q.f_min - q.jitter;
    if (!(hi > lo)) return 0.0;

    const std::size_t n = grid_points + (grid_points % 2);
    const double h = (hi - lo) / static_cast<double>(n);
    auto integrand = [&](double f) {
        return (hi - f) * standard_normal_pdf((f - q.mu) / q.sigma) / q.sigma;
    };
    double acc = integrand(lo) + integrand(hi);
    for (std::size_t i = 1; i < n; ++i) {
        acc += integrand(lo + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

void AcquisitionOptions::validate() const {
    if (candidates < 1) throw std::invalid_argument("acquisition candidates must be >= 1");
}

AcquisitionShift acquisition_shift(Variant variant, const AdaptiveSchedule& schedule,
                                   std::size_t iteration) {
    if (variant == Variant::adaptive) {
        return {conditioning_offset(schedule, iteration), acquisition_jitter(schedule, iteration)};
    }
    return {0.0, schedule.jitter_base};
}

std::vector<double> acquisition_values(const PosteriorFn& posterior,
                                       std::span<const Point> candidates,
                                       const AcquisitionShift& shift, double f_min) {
    const std::vector<Prediction> preds = posterior(candidates);
    std::vector<double> out(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        out[i] = expected_improvement({condition_mean(preds[i].mean, shift.mean_offset),
                                       preds[i].sigma, f_min, shift.jitter});
    }
    return out;
}

std::size_t argmax_lowest_index(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of empty range");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

Point maximize_acquisition(const PosteriorFn& posterior, std::span<const Interval> bounds,
                           const AcquisitionShift& shift, double f_min, SeededRng& rng,
                           const AcquisitionOptions& options) {
    validate_bounds(bounds);
    options.validate();
    const std::size_t dim = bounds.size();

    std::vector<Point> candidates(options.candidates, Point(dim));
    for (auto& c : candidates) {
        for (std::size_t j = 0; j < dim; ++j) c[j] = rng.uniform(bounds[j].lower, bounds[j].upper);
    }
    const std::vector<double> values = acquisition_values(posterior, candidates, shift, f_min);

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    order.resize(std::min(options.refine_top, order.size()));
    if (order.empty()) return candidates[argmax_lowest_index(values)];

    auto score = [&](const Point& p) {
        return acquisition_values(posterior, std::span<const Point>(&p, 1), shift, f_min).front();
    };

    // Local bracket of about two candidate spacings around each start.
    const double spacing =
        2.0 / std::pow(static_cast<double>(options.candidates), 1.0 / static_cast<double>(dim));

    struct Refined {
        Point x;
        double value;
        std::size_t index;
    };
    std::vector<Refined> refined;
    refined.reserve(order.size());
    for (std::size_t idx : order) {
        Point x = candidates[idx];
        double best = values[idx];
        for (std::size_t j = 0; j < dim && options.refine_iterations > 0; ++j) {
            const double half = spacing * bounds[j].width();
            double a = std::max(bounds[j].lower, x[j] - half);
            double b = std::min(bounds[j].upper, x[j] + half);
            Point probe = x;
            auto at = [&](double v) {
                probe[j] = v;
                return score(probe);
            };
            double c = b - kInvPhi * (b - a);
            double d = a + kInvPhi * (b - a);
            double fc = at(c);
            double fd = at(d);
            for (std::size_t it = 0; it < options.refine_iterations; ++it) {
                if (fc >= fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - kInvPhi * (b - a);
                    fc = at(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + kInvPhi * (b - a);
                    fd = at(d);
                }
            }
            const double mid = 0.5 * (a + b);
            const double fm = at(mid);
            if (fm > best) {
                best = fm;
                x[j] = mid;
            }
        }
        refined.push_back({std::move(x), best, idx});
    }

    const auto winner = std::max_element(refined.begin(), refined.end(),
                                         [](const Refined& l, const Refined& r) {
                                             if (l.value != r.value) return l.value < r.value;
                                             return l.index > r.index;
                                         });
    return winner->x;
}

Point propose_next(const FittedGp& model, std::span<const Interval> bounds,
                   std::size_t iteration, Variant variant, const AdaptiveSchedule& schedule,
                   double f_min, SeededRng& rng, const AcquisitionOptions& options) {
    if (bounds.size() != model.dataset().dimension()) {
        throw std::invalid_argument("propose_next: bounds dimension differs from the model");
    }
    const PosteriorFn posterior = [&model](std::span<const Point> xs) {
        return model.posterior(xs);
    };
    return maximize_acquisition(posterior, bounds, acquisition_shift(variant, schedule, iteration),
                                f_min, rng, options);
}

}  // namespace adabo
