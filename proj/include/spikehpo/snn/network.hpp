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
#include <functional>
#include <vector>

#include "spikehpo/common.hpp"
#include "spikehpo/earlystop.hpp"
#include "spikehpo/snn/dataset.hpp"
#include "spikehpo/snn/decoder.hpp"
#include "spikehpo/snn/encoder.hpp"
#include "spikehpo/snn/neuron.hpp"
#include "spikehpo/snn/stdp.hpp"

namespace spikehpo::snn {

inline constexpr const char* kExcitatoryLayer = "excitatory";
inline constexpr const char* kInhibitoryLayer = "inhibitory";

struct NetworkSpec {
    std::size_t n_inputs = 64;
    std::size_t map_size = 30;
    double exc_strength = 22.5;
    double inh_strength = 17.5;
    NeuronParams exc;
    NeuronParams inh;
    StdpParams stdp;
    double weight_norm = 78.4;  // incoming weight sum per excitatory neuron
    std::int64_t epochs = 1;
    DecoderSpec decoder;
    std::size_t frames = 100;
    double max_rate = 0.25;

    void validate() const;
};

/// Called once per presented frame with the excitatory and inhibitory spikes.
using RasterObserver =
    std::function<void(const std::uint8_t* excitatory, const std::uint8_t* inhibitory)>;

/// Input -> excitatory plastic layer with excitatory <-> inhibitory
/// winner-take-all wiring: excitatory j drives inhibitory j with exc_strength,
/// inhibitory j inhibits every other excitatory neuron with inh_strength.
class Network {
public:
    Network(const NetworkSpec& spec, Rng& rng);

    /// Runs one encoded sample. With `learn` the input weights follow STDP and
    /// thresholds adapt; otherwise everything is frozen. Membrane, refractory and
    /// trace state are reset before the sample.
    SampleResponse present(const SpikeTrain& input, bool learn,
                           const RasterObserver& observer = {});

    /// Rescales incoming weights to the configured target.
    void normalize();

    const NetworkSpec& spec() const { return spec_; }
    const Weights& weights() const { return weights_; }
    Weights& weights() { return weights_; }
    const std::vector<double>& theta() const { return exc_.theta(); }

private:
    NetworkSpec spec_;
    Weights weights_;
    LifLayer exc_;
    LifLayer inh_;
    std::vector<double> pre_trace_;
    std::vector<double> post_trace_;
    std::vector<double> current_;
    std::vector<double> inh_current_;
    std::vector<std::uint8_t> exc_spikes_;
    std::vector<std::uint8_t> inh_spikes_;
};

/// Unsupervised training with spike-based early stopping. Each epoch presents
/// every training sample once; after each sample the monitor is updated and the
/// weights are normalized, and training halts as soon as a criterion trips.
StopOutcome train(Network& net, const Dataset& data, const std::vector<StopCriterion>& criteria,
                  Rng& rng);

/// Frozen-network responses to every sample of `data` (at most `limit` if > 0).
std::vector<SampleResponse> record_responses(Network& net, const Dataset& data, Rng& rng,
                                             std::size_t limit = 0);

}  // namespace spikehpo::snn
