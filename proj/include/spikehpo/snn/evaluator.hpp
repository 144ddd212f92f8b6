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
#include <memory>
#include <string>
#include <vector>

#include "spikehpo/earlystop.hpp"
#include "spikehpo/searchspace.hpp"
#include "spikehpo/snn/dataset.hpp"
#include "spikehpo/snn/network.hpp"
#include "spikehpo/trial.hpp"

namespace spikehpo::snn {

/// Everything about the simulator that is not searched over.
struct SimulatorProfile {
    std::shared_ptr<const DatasetSplits> data;
    std::size_t frames = 100;
    double max_rate = 0.25;
    double w_max = 1.0;
    double tau_trace = 20.0;
    double v_reset_exc = -65.0;
    double v_reset_inh = -45.0;
    /// Input count the weight_norm parameter is expressed for; the effective
    /// per-neuron target is weight_norm * n_inputs / reference.
    double weight_norm_reference_inputs = 784.0;
    /// Training samples used for label assignment; 0 means all.
    std::size_t label_samples = 0;
    /// Values for parameters that are not part of the search space.
    Configuration fixed;
};

/// Names the simulator reads from a configuration (searched or fixed).
const std::vector<std::string>& simulator_parameters();

/// Builds a network spec from the searched configuration merged with
/// profile.fixed. Throws ValidationError naming any missing parameter.
NetworkSpec network_spec_from(const Configuration& config, const SimulatorProfile& profile);

/// Train, label on the training split and score on the validation split.
/// The objective is validation accuracy; violations follow the criteria order.
TrialResult evaluate_configuration(const Configuration& config, const SimulatorProfile& profile,
                                   const std::vector<StopCriterion>& criteria,
                                   std::uint64_t seed);

}  // namespace spikehpo::snn
