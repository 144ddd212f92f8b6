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

#include <immintrin.h>

#include "linalg.hpp"
#include "spikehpo/simd/kernels.hpp"

namespace spikehpo::simd::avx2 {

namespace {

// Elementwise kernels below use separate mul/add (never fmadd) so that every
// lane reproduces the scalar reference bit for bit.

void add_row(double* dst, const double* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_loadu_pd(dst + i);
        __m256d s = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
    }
    for (; i < n; ++i) {
        dst[i] += src[i];
    }
}

void scale(double* x, double factor, std::size_t n) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), f));
    }
    for (; i < n; ++i) {
        x[i] *= factor;
    }
}

void multiply(double* x, const double* factors, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(factors + i)));
    }
    for (; i < n; ++i) {
        x[i] *= factors[i];
    }
}

void depress(double* w, const double* trace, double rate, std::size_t n) {
    const __m256d r = _mm256_set1_pd(rate);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wv = _mm256_loadu_pd(w + i);
        __m256d t = _mm256_mul_pd(r, _mm256_loadu_pd(trace + i));
        _mm256_storeu_pd(w + i, _mm256_sub_pd(wv, _mm256_mul_pd(t, wv)));
    }
    for (; i < n; ++i) {
        const double t = rate * trace[i];
        w[i] = w[i] - t * w[i];
    }
}

std::size_t lif_update(double* v, double* refractory, double* theta, const double* current,
                       const LifConstants& c, std::size_t n, std::uint8_t* spikes) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d leak = _mm256_set1_pd(c.leak);
    const __m256d v_rest = _mm256_set1_pd(c.v_rest);
    const __m256d v_reset = _mm256_set1_pd(c.v_reset);
    const __m256d v_th = _mm256_set1_pd(c.v_threshold);
    const __m256d t_ref = _mm256_set1_pd(c.refractory_steps);
    const __m256d theta_plus = _mm256_set1_pd(c.theta_plus);
    const __m256d theta_decay = _mm256_set1_pd(c.theta_decay);

    std::size_t fired = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vv = _mm256_loadu_pd(v + i);
        const __m256d rr = _mm256_loadu_pd(refractory + i);
        const __m256d th = _mm256_loadu_pd(theta + i);
        const __m256d in = _mm256_loadu_pd(current + i);

        const __m256d in_refractory = _mm256_cmp_pd(rr, zero, _CMP_GT_OQ);
        const __m256d next =
            _mm256_add_pd(_mm256_add_pd(vv, _mm256_mul_pd(leak, _mm256_sub_pd(v_rest, vv))), in);
        const __m256d crossed = _mm256_cmp_pd(next, _mm256_add_pd(v_th, th), _CMP_GE_OQ);
        const __m256d spike = _mm256_andnot_pd(in_refractory, crossed);
        const __m256d reset = _mm256_or_pd(in_refractory, spike);

        _mm256_storeu_pd(v + i, _mm256_blendv_pd(next, v_reset, reset));
        __m256d r_new = _mm256_blendv_pd(rr, t_ref, spike);
        r_new = _mm256_blendv_pd(r_new, _mm256_sub_pd(rr, one), in_refractory);
        _mm256_storeu_pd(refractory + i, r_new);
        const __m256d bumped = _mm256_blendv_pd(th, _mm256_add_pd(th, theta_plus), spike);
        _mm256_storeu_pd(theta + i, _mm256_mul_pd(bumped, theta_decay));

        const int mask = _mm256_movemask_pd(spike);
        spikes[i + 0] = static_cast<std::uint8_t>(mask & 1);
        spikes[i + 1] = static_cast<std::uint8_t>((mask >> 1) & 1);
        spikes[i + 2] = static_cast<std::uint8_t>((mask >> 2) & 1);
        spikes[i + 3] = static_cast<std::uint8_t>((mask >> 3) & 1);
        fired += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) {
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
        const __m256d p = _mm256_set1_pd(point[k]);
        const __m256d s = _mm256_set1_pd(inv_ls[k]);
        std::size_t j = 0;
        for (; j + 4 <= m; j += 4) {
            const __m256d d = _mm256_mul_pd(_mm256_sub_pd(p, _mm256_loadu_pd(row + j)), s);
            _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), _mm256_mul_pd(d, d)));
        }
        for (; j < m; ++j) {
            const double d = (point[k] - row[j]) * inv_ls[k];
            out[j] = out[j] + d * d;
        }
    }
}

double weighted_sq_diff(const double* weights, const double* xs, double xi, std::size_t n) {
    const __m256d x = _mm256_set1_pd(xi);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m256d d0 = _mm256_sub_pd(x, _mm256_loadu_pd(xs + j));
        const __m256d d1 = _mm256_sub_pd(x, _mm256_loadu_pd(xs + j + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j), _mm256_mul_pd(d0, d0), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(weights + j + 4), _mm256_mul_pd(d1, d1), acc1);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; j < n; ++j) {
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

}  // namespace spikehpo::simd::avx2
