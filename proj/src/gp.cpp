#include "adabo/gp.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace adabo {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;
constexpr double kMaxEscalatedJitter = 1e-4;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate_bounds(std::span<const Interval> bounds) {
    if (bounds.empty()) {
        throw std::invalid_argument("bounds: at least one dimension required");
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const auto& b = bounds[i];
        if (!finite(b.lower) || !finite(b.upper) || !(b.lower < b.upper)) {
            throw std::invalid_argument("bounds: dimension " + std::to_string(i) +
                                        " must satisfy finite lower < upper");
        }
    }
}

void KernelParams::validate() const {
    if (!finite(variance) || variance <= 0.0) {
        throw std::invalid_argument("kernel variance must be positive");
    }
    if (!finite(lengthscale) || lengthscale <= 0.0) {
        throw std::invalid_argument("kernel lengthscale must be positive");
    }
    if (!finite(noise_variance) || noise_variance < 0.0) {
        throw std::invalid_argument("noise variance must be non-negative");
    }
    if (!finite(diag_jitter) || diag_jitter < 0.0) {
        throw std::invalid_argument("diagonal jitter must be non-negative");
    }
}

void Dataset::validate() const {
    if (points.empty()) {
        throw std::invalid_argument("dataset is empty");
    }
    if (points.size() != targets.size()) {
        throw std::invalid_argument("dataset: points and targets differ in length");
    }
    const std::size_t dim = points.front().size();
    if (dim == 0) {
        throw std::invalid_argument("dataset: points have zero dimension");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) {
            throw std::invalid_argument("dataset: point " + std::to_string(i) + " has dimension " +
                                        std::to_string(points[i].size()) + ", expected " +
                                        std::to_string(dim));
        }
        for (double v : points[i]) {
            if (!finite(v)) throw std::invalid_argument("dataset: non-finite coordinate");
        }
        if (!finite(targets[i])) throw std::invalid_argument("dataset: non-finite target");
    }
}

double matern52(double r, const KernelParams& params) {
    if (!finite(r) || r < 0.0) {
        throw std::invalid_argument("matern52: distance must be finite and non-negative");
    }
    if (!finite(params.variance) || !finite(params.lengthscale) || params.lengthscale <= 0.0) {
        throw std::invalid_argument("matern52: invalid kernel parameters");
    }
    const double s = kSqrt5 * r / params.lengthscale;
    return params.variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

Eigen::MatrixXd kernel_matrix(std::span<const Point> a, std::span<const Point> b,
                              const KernelParams& params) {
    const auto na = static_cast<Eigen::Index>(a.size());
    const auto nb = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd k(na, nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
            k(i, j) = matern52(euclidean_distance(a[i], b[j]), params);
        }
    }
    return k;
}

FittedGp FittedGp::fit(Dataset data, const KernelParams& params, double mean_constant) {
    params.validate();
    data.validate();
    if (!finite(mean_constant)) {
        throw std::invalid_argument("fit: mean constant must be finite");
    }

    const auto n = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd gram = kernel_matrix(data.points, data.points, params);
    const double diag = params.noise_variance + params.diag_jitter;
    gram.diagonal().array() += diag;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw CholeskyError("Gram matrix is not positive definite", params.diag_jitter);
    }
    Eigen::MatrixXd chol = llt.matrixL();
    // LLT accepts pivots that are positive only through rounding; reject
    // those so a singular Gram matrix is reported rather than amplified.
    const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                        gram.diagonal().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double pivot = chol(i, i);
        if (!(pivot * pivot > tiny)) {
            throw CholeskyError("Gram matrix is numerically singular", params.diag_jitter);
        }
    }

    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        residual(i) = data.targets[static_cast<std::size_t>(i)] - mean_constant;
    }
    Eigen::VectorXd weights = llt.solve(residual);
    return FittedGp(std::move(data), params, mean_constant, std::move(chol), std::move(weights));
}

FittedGp FittedGp::fit_with_escalation(Dataset data, const KernelParams& params,
                                       double mean_constant) {
    KernelParams attempt = params;
    while (true) {
        try {
            return fit(data, attempt, mean_constant);
        } catch (const CholeskyError&) {
            const double next = attempt.diag_jitter > 0.0 ? attempt.diag_jitter * 10.0 : 1e-10;
            if (next > kMaxEscalatedJitter * (1.0 + 1e-12)) throw;
            attempt.diag_jitter = next;
        }
    }
}

void FittedGp::check_dimension(std::size_t dim) const {
    if (dim != data_.dimension()) {
        throw std::invalid_argument("posterior: query has dimension " + std::to_string(dim) +
                                    ", model has " + std::to_string(data_.dimension()));
    }
}

Prediction FittedGp::posterior(std::span<const double> x) const {
    const Point query(x.begin(), x.end());
    return posterior(std::span<const Point>(&query, 1)).front();
}

std::vector<Prediction> FittedGp::posterior(std::span<const Point> xs) const {
    for (const auto& x : xs) check_dimension(x.size());
    if (xs.empty()) return {};

    const Eigen::MatrixXd cross = kernel_matrix(data_.points, xs, params_);  // n x m
    const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(cross);
    const Eigen::VectorXd means = cross.transpose() * weights_;
    const Eigen::VectorXd explained = v.colwise().squaredNorm().transpose();

    std::vector<Prediction> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double var = params_.variance - explained(jj);
        out[j].mean = mean_constant_ + means(jj);
        out[j].sigma = std::sqrt(std::max(0.0, var));
    }
    return out;
}

}  // namespace adabo
