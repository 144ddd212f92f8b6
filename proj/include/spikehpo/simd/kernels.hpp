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

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace spikehpo::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

/// True when the binary carries kernels for `isa` and the host CPU can run them.
bool isa_supported(Isa isa);

/// Widest supported ISA, unless SPIKEHPO_SIMD=scalar|avx2 is set in the environment.
Isa default_isa();

Isa active_isa();

/// Switches the process-wide kernel table. Throws std::invalid_argument if unsupported.
void set_active_isa(Isa isa);

/// Constants of one LIF layer update. `refractory_steps` is integer-valued.
struct LifConstants {
    double v_rest;
    double v_reset;
    double v_threshold;
    double leak;  // dt / tau
    double refractory_steps;
    double theta_plus;
    double theta_decay;  // exp(-dt / tau_theta)
};

// Elementwise kernels (add_row .. lif_update, scaled_sq_dist) are bit-identical
// across ISAs: no fused multiply-add, same per-element operation order.
// Reductions and linear algebra agree to rounding only.
struct KernelTable {
    // dst[i] += src[i]
    void (*add_row)(double* dst, const double* src, std::size_t n);
    // x[i] *= factor
    void (*scale)(double* x, double factor, std::size_t n);
    // x[i] *= factors[i]
    void (*multiply)(double* x, const double* factors, std::size_t n);
    // w[i] -= (rate * trace[i]) * w[i]
    void (*depress)(double* w, const double* trace, double rate, std::size_t n);
    // One Euler step of a LIF layer with adaptive threshold; returns the spike count.
    std::size_t (*lif_update)(double* v, double* refractory, double* theta,
                              const double* current, const LifConstants& c,
                              std::size_t n, std::uint8_t* spikes);
    // out[j] = sum_k ((point[k] - coords[k * stride + j]) * inv_ls[k])^2, j < m
    void (*scaled_sq_dist)(const double* point, const double* coords, std::size_t stride,
                           const double* inv_ls, std::size_t dim, std::size_t m,
                           double* out);
    // sum_j weights[j] * (xi - xs[j])^2
    double (*weighted_sq_diff)(const double* weights, const double* xs, double xi,
                               std::size_t n);

    // Dense linear algebra on column-major storage.
    // In-place lower Cholesky of the lower triangle of `a` (n x n). False if not PD.
    bool (*cholesky)(double* a, std::size_t n);
    // b <- L^{-1} b, b is n x cols.
    void (*solve_lower)(const double* l, std::size_t n, double* b, std::size_t cols);
    // b <- L^{-T} b, b is n x cols.
    void (*solve_lower_transposed)(const double* l, std::size_t n, double* b,
                                   std::size_t cols);
    // Lower triangle of c (m x m) -= v^T v, v is k x m.
    void (*gram_subtract)(double* c, const double* v, std::size_t k, std::size_t m);
    // out (n x n, full storage) <- (L L^T)^{-1}.
    void (*cholesky_inverse)(const double* l, std::size_t n, double* out);
};

const KernelTable& kernels();
const KernelTable& kernels(Isa isa);

namespace scalar {
extern const KernelTable kTable;
}
namespace avx2 {
extern const KernelTable kTable;
}

}  // namespace spikehpo::simd
