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

#include "spikehpo/common.hpp"

namespace spikehpo::snn {

/// Binary raster, frames x units, row-major.
struct SpikeTrain {
    std::size_t frames = 0;
    std::size_t units = 0;
    std::vector<std::uint8_t> bits;

    const std::uint8_t* frame(std::size_t t) const { return bits.data() + t * units; }
    std::size_t total() const;
};

/// Independent Bernoulli spikes with per-frame probability intensity * max_rate.
/// Throws ValidationError for intensities outside [0,1] or max_rate outside [0,1].
SpikeTrain poisson_encode(std::span<const double> image, std::size_t frames, double max_rate,
                          Rng& rng);

}  // namespace spikehpo::snn
