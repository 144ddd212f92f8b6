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
#include <string>
#include <vector>

#include "spikehpo/simd/kernels.hpp"

namespace spikehpo::snn {

/// LIF parameters: potentials in mV, time constants in ms (one frame = 1 ms),
/// refractory period in frames.
struct NeuronParams {
    double v_th = -52.0;
    double v_rest = -65.0;
    double v_reset = -65.0;
    double tau = 100.0;
    std::int64_t t_ref = 5;
    double theta_plus = 0.0;
    double tau_theta = 1e7;

    void validate(const std::string& layer) const;
};

struct NeuronState {
    double v = 0.0;
    std::int64_t refractory = 0;
    double theta = 0.0;
};

/// One Euler step of a single neuron; returns true on a spike.
bool lif_step(NeuronState& state, double input_current, const NeuronParams& p);

/// Kernel constants for a layer; `adapt` false freezes the adaptive threshold.
simd::LifConstants lif_constants(const NeuronParams& p, bool adapt);

/// A layer of identical LIF neurons stepped through the active kernel table.
class LifLayer {
public:
    LifLayer(std::size_t size, const NeuronParams& params);

    /// Resets membrane potentials and refractory counters; theta is kept.
    void reset_state();
    void reset_theta();

    /// Advances one frame. `spikes` receives one byte per neuron.
    std::size_t step(const double* current, std::uint8_t* spikes, bool adapt);

    std::size_t size() const { return v_.size(); }
    const NeuronParams& params() const { return params_; }
    const std::vector<double>& potential() const { return v_; }
    const std::vector<double>& theta() const { return theta_; }

private:
    NeuronParams params_;
    simd::LifConstants adaptive_;
    simd::LifConstants frozen_;
    std::vector<double> v_;
    std::vector<double> refractory_;
    std::vector<double> theta_;
};

}  // namespace spikehpo::snn
