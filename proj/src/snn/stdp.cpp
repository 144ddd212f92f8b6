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

#include "spikehpo/snn/stdp.hpp"

#include <algorithm>
#include <cmath>

#include "spikehpo/common.hpp"
#include "spikehpo/simd/kernels.hpp"

namespace spikehpo::snn {

double Weights::column_sum(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < inputs; ++i) {
        s += at(i, j);
    }
    return s;
}

void stdp_update(Weights& w, std::span<double> pre_trace, std::span<double> post_trace,
                 std::span<const std::uint8_t> pre_spikes,
                 std::span<const std::uint8_t> post_spikes, const StdpParams& p) {
    const auto& k = simd::kernels();
    k.scale(pre_trace.data(), std::exp(-1.0 / p.tau_trace_pre), pre_trace.size());
    k.scale(post_trace.data(), std::exp(-1.0 / p.tau_trace_post), post_trace.size());

    for (std::size_t i = 0; i < w.inputs; ++i) {
        if (pre_spikes[i]) {
            k.depress(w.row(i), post_trace.data(), p.lambda_minus, w.neurons);
        }
    }
    for (std::size_t j = 0; j < w.neurons; ++j) {
        if (!post_spikes[j]) {
            continue;
        }
        for (std::size_t i = 0; i < w.inputs; ++i) {
            double& x = w.at(i, j);
            x = x + (p.lambda_plus * pre_trace[i]) * (p.w_max - x);
        }
    }
    for (std::size_t i = 0; i < w.inputs; ++i) {
        if (pre_spikes[i]) pre_trace[i] = 1.0;
    }
    for (std::size_t j = 0; j < w.neurons; ++j) {
        if (post_spikes[j]) post_trace[j] = 1.0;
    }
}

void normalize_weights(Weights& w, double target, double w_max) {
    if (!(target > 0.0)) {
        throw ValidationError("normalization target must be positive");
    }
    std::vector<char> capped(w.inputs);
    for (std::size_t j = 0; j < w.neurons; ++j) {
        std::fill(capped.begin(), capped.end(), 0);
        double fixed = 0.0;  // mass held by capped weights
        // Each pass caps at least one weight or finishes, so this terminates.
        for (std::size_t pass = 0; pass <= w.inputs; ++pass) {
            double free_sum = 0.0;
            for (std::size_t i = 0; i < w.inputs; ++i) {
                if (!capped[i]) free_sum += w.at(i, j);
            }
            if (free_sum <= 0.0) {
                break;
            }
            const double factor = (target - fixed) / free_sum;
            bool newly_capped = false;
            for (std::size_t i = 0; i < w.inputs; ++i) {
                if (!capped[i] && w.at(i, j) * factor > w_max) {
                    capped[i] = 1;
                    w.at(i, j) = w_max;
                    fixed += w_max;
                    newly_capped = true;
                }
            }
            if (!newly_capped) {
                for (std::size_t i = 0; i < w.inputs; ++i) {
                    if (!capped[i]) w.at(i, j) *= factor;
                }
                break;
            }
        }
    }
}

}  // namespace spikehpo::snn
