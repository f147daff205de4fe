#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adabo/adaptive.hpp"
#include "adabo/gp.hpp"
#include "adabo/rng.hpp"
#include "adabo/types.hpp"

namespace adabo {

/// Inputs to expected improvement at one candidate. Minimization: improvement
/// is measured below the incumbent f_min, shifted by the jitter xi.
struct AcquisitionQuery {
    double mu = 0.0;
    double sigma = 0.0;
    double f_min = 0.0;
    double jitter = 0.0;
};

/// Closed form (f_min - mu - xi) Phi(z) + sigma phi(z), z = (f_min - mu - xi) / sigma.
double expected_improvement(const AcquisitionQuery& q);

/// Composite Simpson quadrature of E[(f_min - xi - f)^+] for f ~ N(mu, sigma^2)
/// over [mu - 8 sigma, f_min - xi]. Test oracle for expected_improvement.
double expected_improvement_numeric(const AcquisitionQuery& q, std::size_t grid_points);

enum class Variant { original, adaptive };

/// Settings for the candidate search in maximize_acquisition.
struct AcquisitionOptions {
    std::size_t candidates = 2048;
    std::size_t refine_top = 5;
    std::size_t refine_iterations = 20;

    void validate() const;
};

/// What the acquisition adds on top of the surrogate at one iteration.
struct AcquisitionShift {
    double mean_offset = 0.0;  // added to every posterior mean
    double jitter = 0.0;       // xi
};

AcquisitionShift acquisition_shift(Variant variant, const AdaptiveSchedule& schedule,
                                   std::size_t iteration);

/// Batched surrogate posterior.
using PosteriorFn = std::function<std::vector<Prediction>(std::span<const Point>)>;

/// EI of every candidate, with the mean offset applied to each posterior mean.
std::vector<double> acquisition_values(const PosteriorFn& posterior,
                                       std::span<const Point> candidates,
                                       const AcquisitionShift& shift, double f_min);

/// Index of the maximal value; ties go to the lowest index.
std::size_t argmax_lowest_index(std::span<const double> values);

/// Uniform candidates, then coordinate-wise golden-section refinement of
/// the best `refine_top`. Deterministic for a given rng state.
Point maximize_acquisition(const PosteriorFn& posterior, std::span<const Interval> bounds,
                           const AcquisitionShift& shift, double f_min, SeededRng& rng,
                           const AcquisitionOptions& options = {});

/// Next point to evaluate for a fitted GP. The adaptive variant conditions
/// the mean and decays xi with the iteration; the original variant keeps
/// the raw mean and a fixed xi = jitter_base.
Point propose_next(const FittedGp& model, std::span<const Interval> bounds,
                   std::size_t iteration, Variant variant, const AdaptiveSchedule& schedule,
                   double f_min, SeededRng& rng, const AcquisitionOptions& options = {});

}  // namespace adabo
