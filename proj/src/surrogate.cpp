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

#include "spikehpo/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "spikehpo/lbfgs.hpp"
#include "spikehpo/simd/kernels.hpp"

namespace spikehpo {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873128;
constexpr double kLog2Pi = 1.83787706640934548356065947281123;
constexpr double kJitterLadder[] = {1e-8, 1e-6, 1e-4, 1e-2};

std::vector<double> inverse_lengthscales(const KernelParams& k) {
    std::vector<double> inv(k.lengthscales.size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        inv[i] = 1.0 / k.lengthscales[i];
    }
    return inv;
}

// Writes r^2 between `point` and rows [first, first + count) of `rows` (n x d).
void sq_dist_to_rows(const double* point, const Eigen::MatrixXd& rows, std::size_t first,
                     std::size_t count, const std::vector<double>& inv_ls, double* out) {
    simd::kernels().scaled_sq_dist(point, rows.data() + first,
                                   static_cast<std::size_t>(rows.rows()), inv_ls.data(),
                                   static_cast<std::size_t>(rows.cols()), count, out);
}

// Squared scaled distances between all rows of x; symmetric, full storage.
Eigen::MatrixXd pairwise_sq_dist(const Eigen::MatrixXd& x, const std::vector<double>& inv_ls) {
    const auto n = static_cast<std::size_t>(x.rows());
    Eigen::MatrixXd r2(x.rows(), x.rows());
    std::vector<double> point(static_cast<std::size_t>(x.cols()));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < point.size(); ++k) {
            point[k] = x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        }
        sq_dist_to_rows(point.data(), x, j, n - j, inv_ls, r2.col(static_cast<Eigen::Index>(j)).data() + j);
    }
    r2.triangularView<Eigen::StrictlyUpper>() = r2.transpose();
    return r2;
}

Eigen::MatrixXd to_matrix(const std::vector<UnitPoint>& points) {
    if (points.empty()) {
        return {};
    }
    const auto d = points.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) {
            throw ValidationError("inconsistent point dimensions");
        }
        for (std::size_t k = 0; k < d; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = points[i][k];
        }
    }
    return m;
}

bool cholesky_in_place(Eigen::MatrixXd& a) {
    return simd::kernels().cholesky(a.data(), static_cast<std::size_t>(a.rows()));
}

void solve_lower(const Eigen::MatrixXd& l, double* b, std::size_t cols) {
    simd::kernels().solve_lower(l.data(), static_cast<std::size_t>(l.rows()), b, cols);
}

void solve_lower_transposed(const Eigen::MatrixXd& l, double* b, std::size_t cols) {
    simd::kernels().solve_lower_transposed(l.data(), static_cast<std::size_t>(l.rows()), b, cols);
}

// Hyperparameters live in log space, squashed into their bounds with a sigmoid so
// the likelihood can be optimized without constraints.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    Box(const HyperBounds& b, std::size_t dim) {
        lo.assign(dim, std::log(b.lengthscale_min));
        hi.assign(dim, std::log(b.lengthscale_max));
        lo.push_back(std::log(b.signal_min));
        hi.push_back(std::log(b.signal_max));
        lo.push_back(std::log(b.noise_min));
        hi.push_back(std::log(b.noise_max));
    }

    std::size_t size() const { return lo.size(); }

    double to_log(std::size_t i, double z) const {
        return lo[i] + (hi[i] - lo[i]) / (1.0 + std::exp(-z));
    }

    double to_z(std::size_t i, double log_value) const {
        const double f = std::clamp((log_value - lo[i]) / (hi[i] - lo[i]), 1e-6, 1.0 - 1e-6);
        return std::log(f / (1.0 - f));
    }

    KernelParams params(std::span<const double> z) const {
        const std::size_t d = size() - 2;
        KernelParams k;
        k.lengthscales.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            k.lengthscales[i] = std::exp(to_log(i, z[i]));
        }
        k.signal_variance = std::exp(to_log(d, z[d]));
        k.noise_variance = std::exp(to_log(d + 1, z[d + 1]));
        return k;
    }

    std::vector<double> z_of(const KernelParams& k) const {
        const std::size_t d = size() - 2;
        std::vector<double> z(size());
        for (std::size_t i = 0; i < d; ++i) {
            z[i] = to_z(i, std::log(k.lengthscales[i]));
        }
        z[d] = to_z(d, std::log(k.signal_variance));
        z[d + 1] = to_z(d + 1, std::log(k.noise_variance));
        return z;
    }

    // d log_value / d z
    double slope(std::size_t i, double z) const {
        const double s = 1.0 / (1.0 + std::exp(-z));
        return (hi[i] - lo[i]) * s * (1.0 - s);
    }
};

}  // namespace

double matern52_correlation(double r) {
    const double sr = kSqrt5 * r;
    return (1.0 + sr + sr * sr / 3.0) * std::exp(-sr);
}

double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& k) {
    if (a.size() != b.size() || a.size() != k.lengthscales.size()) {
        throw ValidationError("matern52: dimension mismatch");
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / k.lengthscales[i];
        r2 += d * d;
    }
    return k.signal_variance * matern52_correlation(std::sqrt(r2));
}

Eigen::MatrixXd cross_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const KernelParams& kernel) {
    const auto inv_ls = inverse_lengthscales(kernel);
    Eigen::MatrixXd k(a.rows(), b.rows());
    std::vector<double> point(static_cast<std::size_t>(b.cols()));
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
            point[static_cast<std::size_t>(c)] = b(j, c);
        }
        double* col = k.col(j).data();
        sq_dist_to_rows(point.data(), a, 0, static_cast<std::size_t>(a.rows()), inv_ls, col);
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            col[i] = kernel.signal_variance * matern52_correlation(std::sqrt(col[i]));
        }
    }
    return k;
}

double log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                               const KernelParams& kernel, std::vector<double>* grad) {
    const Eigen::Index n = x.rows();
    const auto d = static_cast<std::size_t>(x.cols());
    if (kernel.lengthscales.size() != d || y.size() != n) {
        throw ValidationError("log_marginal_likelihood: dimension mismatch");
    }
    const auto inv_ls = inverse_lengthscales(kernel);
    const Eigen::MatrixXd r2 = pairwise_sq_dist(x, inv_ls);
    // Correlation and, for the gradient, (5/3)(1 + sqrt5 r) exp(-sqrt5 r), sharing
    // one exponential per pair.
    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd dcorr(grad != nullptr ? n : 0, grad != nullptr ? n : 0);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const double sr = kSqrt5 * std::sqrt(r2(i, j));
            const double e = std::exp(-sr);
            corr(i, j) = (1.0 + sr + sr * sr / 3.0) * e;
            if (grad != nullptr) {
                dcorr(i, j) = (5.0 / 3.0) * (1.0 + sr) * e;
            }
        }
    }
    // Only the lower triangles of corr and l are filled; the Cholesky reads no more.
    Eigen::MatrixXd l = kernel.signal_variance * corr;
    l.diagonal().array() += kernel.noise_variance;
    if (!cholesky_in_place(l)) {
        return -std::numeric_limits<double>::infinity();
    }
    Eigen::VectorXd alpha = y;
    solve_lower(l, alpha.data(), 1);
    const double fit_term = alpha.squaredNorm();
    solve_lower_transposed(l, alpha.data(), 1);
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const double lml = -0.5 * fit_term - 0.5 * log_det - 0.5 * static_cast<double>(n) * kLog2Pi;

    if (grad != nullptr) {
        Eigen::MatrixXd k_inv(n, n);
        simd::kernels().cholesky_inverse(l.data(), static_cast<std::size_t>(n), k_inv.data());

        // W = alpha alpha^T - K^{-1}. d K / d log sigma^2 = sigma^2 * corr,
        // d K / d log noise = noise * I, and d K_ij / d log l_k =
        // sigma^2 (5/3)(1 + sqrt5 r) exp(-sqrt5 r) (dx_k / l_k)^2, so g holds
        // sigma^2 * dcorr * W and the lengthscale terms reduce over it below.
        double signal_sum = 0.0;
        double trace = 0.0;
        Eigen::MatrixXd g(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wjj = alpha[j] * alpha[j] - k_inv(j, j);
            trace += wjj;
            signal_sum += wjj * corr(j, j);
            g(j, j) = kernel.signal_variance * dcorr(j, j) * wjj;
            for (Eigen::Index i = j + 1; i < n; ++i) {
                const double w = alpha[i] * alpha[j] - k_inv(i, j);
                signal_sum += 2.0 * w * corr(i, j);
                const double gij = kernel.signal_variance * dcorr(i, j) * w;
                g(i, j) = gij;
                g(j, i) = gij;
            }
        }
        grad->assign(d + 2, 0.0);
        (*grad)[d] = 0.5 * kernel.signal_variance * signal_sum;
        (*grad)[d + 1] = 0.5 * kernel.noise_variance * trace;
        const auto& kern = simd::kernels();
        for (std::size_t k = 0; k < d; ++k) {
            const double* xk = x.col(static_cast<Eigen::Index>(k)).data();
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += kern.weighted_sq_diff(g.col(i).data(), xk, xk[i],
                                             static_cast<std::size_t>(n));
            }
            (*grad)[k] = 0.5 * acc * inv_ls[k] * inv_ls[k];
        }
    }
    return lml;
}

GPModel GPModel::with_kernel(const std::vector<UnitPoint>& x, std::span<const double> y,
                             const KernelParams& kernel) {
    if (x.size() != y.size()) {
        throw ValidationError("GP fit: inputs and targets differ in length");
    }
    // Keep the latest of any rows closer than 1e-12.
    std::vector<std::size_t> keep;
    for (std::size_t i = x.size(); i-- > 0;) {
        bool duplicate = false;
        for (std::size_t j : keep) {
            double gap = 0.0;
            for (std::size_t k = 0; k < x[i].size(); ++k) {
                gap = std::max(gap, std::abs(x[i][k] - x[j][k]));
            }
            if (gap < 1e-12) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            keep.push_back(i);
        }
    }
    std::reverse(keep.begin(), keep.end());
    if (keep.size() < 2) {
        throw FitError("GP fit needs at least two distinct points");
    }

    GPModel m;
    std::vector<UnitPoint> rows;
    rows.reserve(keep.size());
    m.y_.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (!std::isfinite(y[keep[i]])) {
            throw FitError("GP fit: non-finite target");
        }
        rows.push_back(x[keep[i]]);
        m.y_[static_cast<Eigen::Index>(i)] = y[keep[i]];
    }
    m.x_ = to_matrix(rows);
    if (kernel.lengthscales.size() != m.dimension()) {
        throw ValidationError("GP fit: kernel dimension mismatch");
    }
    m.y_mean_ = m.y_.mean();
    const double var = (m.y_.array() - m.y_mean_).square().mean();
    m.y_std_ = var > 0.0 ? std::sqrt(var) : 1.0;
    m.y_ = (m.y_.array() - m.y_mean_) / m.y_std_;
    m.kernel_ = kernel;
    m.factorize();
    return m;
}

GPModel GPModel::fit(const std::vector<UnitPoint>& x, std::span<const double> y,
                     const FitOptions& options, Rng& rng) {
    if (x.empty()) {
        throw FitError("GP fit needs at least two distinct points");
    }
    const std::size_t d = x.front().size();
    const HyperBounds& b = options.bounds;

    KernelParams initial;
    initial.lengthscales.assign(d, std::clamp(0.5, b.lengthscale_min, b.lengthscale_max));
    initial.signal_variance = std::clamp(1.0, b.signal_min, b.signal_max);
    initial.noise_variance = std::clamp(1e-4, b.noise_min, b.noise_max);
    GPModel m = with_kernel(x, y, initial);

    if ((m.y_.array() == 0.0).all()) {
        // Constant targets: nothing to explain, collapse the prior onto the mean.
        KernelParams flat = initial;
        flat.signal_variance = b.noise_min;
        flat.noise_variance = b.noise_min;
        m.kernel_ = flat;
        m.factorize();
        return m;
    }

    const Box box(b, d);
    std::vector<std::vector<double>> starts;
    if (options.warm_start && options.warm_start->lengthscales.size() == d) {
        starts.push_back(box.z_of(*options.warm_start));
    } else {
        starts.push_back(box.z_of(initial));
    }
    for (std::size_t r = 0; r < options.restarts; ++r) {
        std::vector<double> z(box.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = box.to_z(i, box.lo[i] + uniform01(rng) * (box.hi[i] - box.lo[i]));
        }
        starts.push_back(std::move(z));
    }

    const Eigen::MatrixXd& xs = m.x_;
    const Eigen::VectorXd& ys = m.y_;
    Objective neg_lml = [&](std::span<const double> z, std::span<double> g) {
        std::vector<double> grad_log;
        const double v = log_marginal_likelihood(xs, ys, box.params(z), &grad_log);
        if (!std::isfinite(v)) {
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < z.size(); ++i) {
            g[i] = -grad_log[i] * box.slope(i, z[i]);
        }
        return -v;
    };

    LbfgsOptions lopts;
    lopts.max_iterations = options.max_iterations;
    lopts.relative_tolerance = options.relative_tolerance;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_z;
    for (auto& z0 : starts) {
        const LbfgsResult res = lbfgs_minimize(neg_lml, std::move(z0), lopts);
        if (std::isfinite(res.value) && res.value < best) {
            best = res.value;
            best_z = res.x;
        }
    }
    if (best_z.empty()) {
        throw FitError("GP fit: marginal likelihood not finite at any start");
    }
    m.kernel_ = box.params(best_z);
    m.factorize();
    return m;
}

void GPModel::factorize() {
    const auto inv_ls = inverse_lengthscales(kernel_);
    const Eigen::MatrixXd r2 = pairwise_sq_dist(x_, inv_ls);
    Eigen::MatrixXd base = r2.unaryExpr([this](double v) {
        return kernel_.signal_variance * matern52_correlation(std::sqrt(v));
    });
    base.diagonal().array() += kernel_.noise_variance;

    bool ok = false;
    for (double extra : {0.0, kJitterLadder[0], kJitterLadder[1], kJitterLadder[2], kJitterLadder[3]}) {
        chol_ = base;
        chol_.diagonal().array() += extra;
        if (cholesky_in_place(chol_)) {
            jitter_ = extra;
            ok = true;
            break;
        }
    }
    if (!ok) {
        throw FitError("GP fit: kernel matrix not positive definite after jitter escalation");
    }
    alpha_ = y_;
    solve_lower(chol_, alpha_.data(), 1);
    const double fit_term = alpha_.squaredNorm();
    solve_lower_transposed(chol_, alpha_.data(), 1);
    log_likelihood_ = -0.5 * fit_term - chol_.diagonal().array().log().sum() -
                      0.5 * static_cast<double>(y_.size()) * kLog2Pi;
}

Prediction GPModel::posterior(std::span<const double> q) const {
    if (q.size() != dimension()) {
        throw ValidationError("posterior: query dimension mismatch");
    }
    const auto inv_ls = inverse_lengthscales(kernel_);
    const auto n = size();
    Eigen::VectorXd ks(static_cast<Eigen::Index>(n));
    sq_dist_to_rows(q.data(), x_, 0, n, inv_ls, ks.data());
    for (Eigen::Index i = 0; i < ks.size(); ++i) {
        ks[i] = kernel_.signal_variance * matern52_correlation(std::sqrt(ks[i]));
    }
    Prediction p;
    p.mean = y_mean_ + y_std_ * ks.dot(alpha_);
    solve_lower(chol_, ks.data(), 1);
    p.variance = std::max(0.0, kernel_.signal_variance - ks.squaredNorm()) * y_std_ * y_std_;
    return p;
}

std::vector<double> GPModel::thompson_draw(const std::vector<UnitPoint>& candidates,
                                           Rng& rng) const {
    if (candidates.empty()) {
        throw ValidationError("thompson_draw: empty candidate set");
    }
    // Identical candidates share one joint-sample coordinate.
    std::map<UnitPoint, std::size_t> slot;
    std::vector<std::size_t> index(candidates.size());
    std::vector<UnitPoint> unique;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].size() != dimension()) {
            throw ValidationError("thompson_draw: candidate dimension mismatch");
        }
        auto [it, inserted] = slot.emplace(candidates[i], unique.size());
        if (inserted) {
            unique.push_back(candidates[i]);
        }
        index[i] = it->second;
    }
    const Eigen::MatrixXd c = to_matrix(unique);
    const auto u = static_cast<std::size_t>(c.rows());

    Eigen::MatrixXd v = cross_covariance(x_, c, kernel_);  // n x u
    const Eigen::VectorXd mean = v.transpose() * alpha_;
    solve_lower(chol_, v.data(), u);

    // Lower triangle of the prior covariance among candidates.
    const auto inv_ls = inverse_lengthscales(kernel_);
    Eigen::MatrixXd cov(c.rows(), c.rows());
    std::vector<double> point(dimension());
    for (std::size_t j = 0; j < u; ++j) {
        for (std::size_t k = 0; k < point.size(); ++k) {
            point[k] = c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        }
        double* col = cov.col(static_cast<Eigen::Index>(j)).data();
        sq_dist_to_rows(point.data(), c, j, u - j, inv_ls, col + j);
        for (std::size_t i = j; i < u; ++i) {
            col[i] = kernel_.signal_variance * matern52_correlation(std::sqrt(col[i]));
        }
    }
    simd::kernels().gram_subtract(cov.data(), v.data(), size(), u);

    Eigen::MatrixXd factor;
    bool ok = false;
    // Jitter relative to the covariance scale, so near-zero posterior variances
    // (candidates at training points) are not inflated.
    const double scale = std::max(cov.diagonal().mean(), std::numeric_limits<double>::min());
    for (double jitter : kJitterLadder) {
        factor = cov;
        factor.diagonal().array() += jitter * scale;
        if (cholesky_in_place(factor)) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        throw FitError("thompson_draw: posterior covariance not positive definite");
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(u));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = normal(rng);
    }
    const Eigen::VectorXd f = mean + factor.triangularView<Eigen::Lower>() * z;

    std::vector<double> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out[i] = y_mean_ + y_std_ * f[static_cast<Eigen::Index>(index[i])];
    }
    return out;
}

}  // namespace spikehpo
