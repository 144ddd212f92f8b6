// Copyright 2026-present the spikehpo project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spikehpo/common.hpp"

namespace spikehpo {

/// ARD Matern-5/2 covariance parameters, in standardized-target units.
struct KernelParams {
    std::vector<double> lengthscales;
    double signal_variance = 1.0;
    double noise_variance = 1e-6;
};

struct HyperBounds {
    double lengthscale_min = 0.005;
    double lengthscale_max = 20.0;
    double signal_min = 0.05;
    double signal_max = 20.0;
    double noise_min = 1e-8;
    double noise_max = 1.0;
};

/// Matern-5/2 correlation as a function of the scaled distance r.
double matern52_correlation(double r);

/// sigma^2 (1 + sqrt5 r + 5 r^2 / 3) exp(-sqrt5 r), r the lengthscale-scaled distance.
double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& k);

/// Log marginal likelihood of standardized targets `y` at inputs `x` (n x d).
/// When `grad` is given it receives the gradient with respect to
/// (log lengthscale_1..d, log signal_variance, log noise_variance).
/// Returns -infinity when the kernel matrix cannot be factorized.
double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const KernelParams& kernel, std::vector<double>* grad = nullptr);

struct FitOptions {
    std::size_t restarts = 4;
    std::size_t max_iterations = 50;
    /// Stop a start once the likelihood improves by less than this, relatively.
    double relative_tolerance = 2.2e-9;
    HyperBounds bounds;
    /// Extra starting point, typically the previous fit of the same model.
    std::optional<KernelParams> warm_start;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Gaussian-process regression model; immutable after fit().
class GPModel {
public:
    /// Fits on (x, y), standardizing y and maximizing the marginal likelihood.
    /// Rows closer than 1e-12 are deduplicated keeping the latest one.
    static GPModel fit(const std::vector<UnitPoint>& x, std::span<const double> y,
                       const FitOptions& options, Rng& rng);

    /// Model with fixed kernel parameters (no likelihood optimization).
    static GPModel with_kernel(const std::vector<UnitPoint>& x, std::span<const double> y,
                               const KernelParams& kernel);

    Prediction posterior(std::span<const double> q) const;

    /// One joint posterior sample at `candidates`, aligned with their order.
    std::vector<double> thompson_draw(const std::vector<UnitPoint>& candidates, Rng& rng) const;

    const KernelParams& kernel() const { return kernel_; }
    std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }
    std::size_t dimension() const { return static_cast<std::size_t>(x_.cols()); }
    double target_mean() const { return y_mean_; }
    double target_std() const { return y_std_; }
    double log_likelihood() const { return log_likelihood_; }
    /// Diagonal jitter that made the training kernel matrix factorizable.
    double jitter() const { return jitter_; }

private:
    GPModel() = default;
    void factorize();

    Eigen::MatrixXd x_;  // n x d, column-major
    Eigen::VectorXd y_;  // standardized
    double y_mean_ = 0.0;
    double y_std_ = 1.0;
    KernelParams kernel_;
    Eigen::MatrixXd chol_;  // lower factor of K + (noise + jitter) I
    Eigen::VectorXd alpha_;
    double jitter_ = 0.0;
    double log_likelihood_ = 0.0;
};

/// Kernel matrix between rows of a (n x d) and rows of b (m x d).
Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const KernelParams& kernel);

}  // namespace spikehpo
