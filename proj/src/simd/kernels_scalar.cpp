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

#include "linalg.hpp"
#include "spikehpo/simd/kernels.hpp"

namespace spikehpo::simd::scalar {

namespace {

void add_row(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] += src[i];
    }
}

void scale(double* x, double factor, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] *= factor;
    }
}

void multiply(double* x, const double* factors, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        x[i] *= factors[i];
    }
}

void depress(double* w, const double* trace, double rate, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double t = rate * trace[i];
        w[i] = w[i] - t * w[i];
    }
}

std::size_t lif_update(double* v, double* refractory, double* theta, const double* current,
                       const LifConstants& c, std::size_t n, std::uint8_t* spikes) {
    std::size_t fired = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool spike = false;
        if (refractory[i] > 0.0) {
            refractory[i] = refractory[i] - 1.0;
            v[i] = c.v_reset;
        } else {
            const double next = (v[i] + c.leak * (c.v_rest - v[i])) + current[i];
            spike = next >= c.v_threshold + theta[i];
            if (spike) {
                v[i] = c.v_reset;
                refractory[i] = c.refractory_steps;
            } else {
                v[i] = next;
            }
        }
        const double bumped = spike ? theta[i] + c.theta_plus : theta[i];
        theta[i] = bumped * c.theta_decay;
        spikes[i] = spike ? 1 : 0;
        fired += spike ? 1 : 0;
    }
    return fired;
}

void scaled_sq_dist(const double* point, const double* coords, std::size_t stride,
                    const double* inv_ls, std::size_t dim, std::size_t m, double* out) {
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = 0.0;
    }
    for (std::size_t k = 0; k < dim; ++k) {
        const double* row = coords + k * stride;
        const double p = point[k];
        const double s = inv_ls[k];
        for (std::size_t j = 0; j < m; ++j) {
            const double d = (p - row[j]) * s;
            out[j] = out[j] + d * d;
        }
    }
}

double weighted_sq_diff(const double* weights, const double* xs, double xi, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = xi - xs[j];
        acc += weights[j] * (d * d);
    }
    return acc;
}

}  // namespace

const KernelTable kTable{
    add_row,        scale,       multiply,    depress,
    lif_update,     scaled_sq_dist,
    weighted_sq_diff,
    cholesky,       solve_lower, solve_lower_transposed,
    gram_subtract,
    cholesky_inverse,
};

}  // namespace spikehpo::simd::scalar
