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

#include "spikehpo/earlystop.hpp"
#include "spikehpo/optimizer.hpp"
#include "spikehpo/scheduler.hpp"
#include "spikehpo/searchspace.hpp"
#include "spikehpo/snn/dataset.hpp"
#include "spikehpo/snn/evaluator.hpp"

namespace spikehpo {

/// All problems found while reading a configuration, one "path: message" each.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct DatasetConfig {
    std::string kind = "synthetic";  // "synthetic" or "idx"
    snn::SyntheticSpec synthetic;
    std::string train_images;
    std::string train_labels;
    std::string valid_images;
    std::string valid_labels;
    std::size_t limit = 0;  // per split, idx only
};

struct SimulatorConfig {
    std::size_t frames = 100;
    double max_rate = 0.25;
    double w_max = 1.0;
    double tau_trace = 20.0;
    double v_reset_exc = -65.0;
    double v_reset_inh = -45.0;
    double weight_norm_reference_inputs = 784.0;
    std::size_t label_samples = 0;
    Configuration fixed;
    DatasetConfig dataset;
};

struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::string output_dir;
    ExperimentBudget budget;
    SearchSpace space;
    ScboConfig scbo;
    std::vector<StopCriterion> early_stopping;
    SimulatorConfig simulator;
};

/// Parses and validates a JSON configuration; unknown keys are errors.
/// Throws ConfigError listing every problem.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form with every default spelled out; parse_config accepts it.
std::string dump_config(const ExperimentConfig& config);

/// Cross-section checks: every simulator parameter is searched or fixed, and
/// early-stopping layers exist. Throws ConfigError.
void validate_experiment(const ExperimentConfig& config);

/// Loads or generates the dataset splits described by the configuration.
snn::DatasetSplits load_dataset(const DatasetConfig& config);

snn::SimulatorProfile make_profile(const ExperimentConfig& config,
                                   std::shared_ptr<const snn::DatasetSplits> data);

}  // namespace spikehpo
