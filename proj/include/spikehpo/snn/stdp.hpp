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
#include <span>
#include <vector>

namespace spikehpo::snn {

struct StdpParams {
    double lambda_minus = 1e-3;
    double lambda_plus = 1e-3;
    double w_max = 1.0;
    double tau_trace_pre = 20.0;
    double tau_trace_post = 20.0;
};

/// Dense input -> neuron weights, row-major [input][neuron].
struct Weights {
    std::size_t inputs = 0;
    std::size_t neurons = 0;
    std::vector<double> w;

    Weights() = default;
    Weights(std::size_t n_in, std::size_t n_out) : inputs(n_in), neurons(n_out), w(n_in * n_out) {}

    double& at(std::size_t i, std::size_t j) { return w[i * neurons + j]; }
    double at(std::size_t i, std::size_t j) const { return w[i * neurons + j]; }
    const double* row(std::size_t i) const { return w.data() + i * neurons; }
    double* row(std::size_t i) { return w.data() + i * neurons; }
    double column_sum(std::size_t j) const;
};

/// One frame of pair-based STDP. Traces decay first, then a pre spike at input i
/// depresses w[i][j] by lambda_minus * post_trace[j] * w[i][j], a post spike at
/// neuron j potentiates w[i][j] by lambda_plus * pre_trace[i] * (w_max - w[i][j]),
/// and finally the traces of spiking units are set to 1.
void stdp_update(Weights& w, std::span<double> pre_trace, std::span<double> post_trace,
                 std::span<const std::uint8_t> pre_spikes,
                 std::span<const std::uint8_t> post_spikes, const StdpParams& p);

/// Rescales each neuron's incoming weights to sum to `target`, capping at w_max
/// and redistributing the excess over the uncapped weights. All-zero columns are
/// left untouched.
void normalize_weights(Weights& w, double target, double w_max);

}  // namespace spikehpo::snn
