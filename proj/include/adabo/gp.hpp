#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <vector>

#include "adabo/types.hpp"

namespace adabo {

/// Hyperparameters of the isotropic Matern 5/2 covariance plus the
/// diagonal terms added to the Gram matrix before factorization.
struct KernelParams {
    double variance = 1.0;
    double lengthscale = 1.0;
    double noise_variance = 1e-2;
    double diag_jitter = 1e-10;

    void validate() const;
};

/// Training inputs and their observed targets.
struct Dataset {
    std::vector<Point> points;
    std::vector<double> targets;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
    /// Non-empty, consistent dimensions, finite values, matching lengths.
    void validate() const;
};

/// Raised when K + (noise + jitter) I is not numerically positive definite.
class CholeskyError : public std::runtime_error {
public:
    CholeskyError(const std::string& what, double jitter)
        : std::runtime_error(what), jitter_(jitter) {}

    [[nodiscard]] double jitter() const { return jitter_; }

private:
    double jitter_;
};

/// variance * (1 + sqrt5 r/l + 5 r^2/(3 l^2)) * exp(-sqrt5 r/l)
double matern52(double r, const KernelParams& params);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Gram matrix with entry (i, j) = matern52(|a_i - b_j|).
Eigen::MatrixXd kernel_matrix(std::span<const Point> a, std::span<const Point> b,
                              const KernelParams& params);

/// Latent-function posterior at one input (observation noise excluded).
struct Prediction {
    double mean = 0.0;
    double sigma = 0.0;
};

/// Exact GP regression posterior with a constant prior mean.
///
/// Holds the lower Cholesky factor L of K + (noise_variance + diag_jitter) I
/// and the weights w = (K + ...)^-1 (y - m). Immutable once constructed, so
/// a fitted model may be queried concurrently.
class FittedGp {
public:
    /// Throws CholeskyError if the regularized Gram matrix cannot be factored.
    static FittedGp fit(Dataset data, const KernelParams& params, double mean_constant = 0.0);

    /// Like fit, but on CholeskyError retries with diag_jitter multiplied by
    /// 10 (starting from 1e-10 when it is zero) until it would exceed 1e-4.
    static FittedGp fit_with_escalation(Dataset data, const KernelParams& params,
                                        double mean_constant = 0.0);

    [[nodiscard]] Prediction posterior(std::span<const double> x) const;
    [[nodiscard]] std::vector<Prediction> posterior(std::span<const Point> xs) const;

    [[nodiscard]] const Dataset& dataset() const { return data_; }
    [[nodiscard]] const KernelParams& params() const { return params_; }
    [[nodiscard]] double mean_constant() const { return mean_constant_; }
    [[nodiscard]] const Eigen::MatrixXd& cholesky() const { return chol_; }
    [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }

private:
    FittedGp(Dataset data, const KernelParams& params, double mean_constant,
             Eigen::MatrixXd chol, Eigen::VectorXd weights)
        : data_(std::move(data)), params_(params), mean_constant_(mean_constant),
          chol_(std::move(chol)), weights_(std::move(weights)) {}

    void check_dimension(std::size_t dim) const;

    Dataset data_;
    KernelParams params_;
    double mean_constant_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd weights_;
};

}  // namespace adabo
