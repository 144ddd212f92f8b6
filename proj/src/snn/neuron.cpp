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

#include "spikehpo/snn/neuron.hpp"

#include <algorithm>
#include <cmath>

#include "spikehpo/common.hpp"

namespace spikehpo::snn {

void NeuronParams::validate(const std::string& layer) const {
    auto fail = [&](const std::string& what) {
        throw ValidationError(layer + " neurons: " + what);
    };
    if (!std::isfinite(v_th) || !std::isfinite(v_rest) || !std::isfinite(v_reset)) {
        fail("potentials must be finite");
    }
    if (!(tau > 0.0)) fail("tau must be positive");
    if (t_ref < 0) fail("t_ref must be >= 0");
    if (!(v_reset <= v_th)) fail("v_reset must not exceed v_th");
    if (!(theta_plus >= 0.0)) fail("theta_plus must be >= 0");
    if (!(tau_theta > 0.0)) fail("tau_theta must be positive");
}

bool lif_step(NeuronState& s, double input_current, const NeuronParams& p) {
    bool spike = false;
    if (s.refractory > 0) {
        --s.refractory;
        s.v = p.v_reset;
    } else {
        const double next = (s.v + (1.0 / p.tau) * (p.v_rest - s.v)) + input_current;
        spike = next >= p.v_th + s.theta;
        if (spike) {
            s.v = p.v_reset;
            s.refractory = p.t_ref;
        } else {
            s.v = next;
        }
    }
    const double bumped = spike ? s.theta + p.theta_plus : s.theta;
    s.theta = bumped * std::exp(-1.0 / p.tau_theta);
    return spike;
}

simd::LifConstants lif_constants(const NeuronParams& p, bool adapt) {
    simd::LifConstants c{};
    c.v_rest = p.v_rest;
    c.v_reset = p.v_reset;
    c.v_threshold = p.v_th;
    c.leak = 1.0 / p.tau;
    c.refractory_steps = static_cast<double>(p.t_ref);
    c.theta_plus = adapt ? p.theta_plus : 0.0;
    c.theta_decay = adapt ? std::exp(-1.0 / p.tau_theta) : 1.0;
    return c;
}

LifLayer::LifLayer(std::size_t size, const NeuronParams& params)
    : params_(params),
      adaptive_(lif_constants(params, true)),
      frozen_(lif_constants(params, false)),
      v_(size, params.v_rest),
      refractory_(size, 0.0),
      theta_(size, 0.0) {}

void LifLayer::reset_state() {
    std::fill(v_.begin(), v_.end(), params_.v_rest);
    std::fill(refractory_.begin(), refractory_.end(), 0.0);
}

void LifLayer::reset_theta() {
    std::fill(theta_.begin(), theta_.end(), 0.0);
}

std::size_t LifLayer::step(const double* current, std::uint8_t* spikes, bool adapt) {
    return simd::kernels().lif_update(v_.data(), refractory_.data(), theta_.data(), current,
                                      adapt ? adaptive_ : frozen_, v_.size(), spikes);
}

}  // namespace spikehpo::snn
