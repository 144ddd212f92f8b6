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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spikehpo::snn {

enum class DecoderKind { kAverage, kMax, kNGram };

struct DecoderSpec {
    DecoderKind kind = DecoderKind::kAverage;
    std::size_t n = 0;  // n-gram length

    std::string name() const;
};

/// "average", "max" or "<n>-gram".
DecoderSpec parse_decoder(std::string_view text);

/// Excitatory activity during one sample presentation.
struct SampleResponse {
    std::vector<std::uint32_t> counts;  // spikes per neuron
    std::vector<std::uint32_t> order;   // neuron ids by first-spike time, ties by id
    std::int64_t excitatory_spikes = 0;
    std::int64_t inhibitory_spikes = 0;
};

struct NGramTable {
    std::size_t n = 0;
    std::map<std::vector<std::uint32_t>, std::vector<double>> scores;  // tuple -> per-class
};

struct LabelAssignment {
    std::size_t classes = 0;
    std::vector<int> labels;
    std::vector<bool> dead;
    std::optional<NGramTable> ngram;
};

/// Labels each neuron by the class with the highest mean spike count (ties to the
/// lower class id). Neurons silent on every class get label 0 and are marked dead.
/// `ngram_n` > 0 also builds the ordered-firing table.
LabelAssignment assign_labels(const std::vector<SampleResponse>& responses,
                              const std::vector<int>& labels, std::size_t classes,
                              std::size_t ngram_n = 0);

/// Predicted class for one response; samples without usable spikes predict 0.
int predict(const SampleResponse& response, const LabelAssignment& assignment,
            const DecoderSpec& decoder);

/// Fraction of correctly predicted samples.
double accuracy(const std::vector<SampleResponse>& responses, const std::vector<int>& labels,
                const LabelAssignment& assignment, const DecoderSpec& decoder);

}  // namespace spikehpo::snn
