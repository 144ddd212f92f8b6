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

#include "spikehpo/snn/encoder.hpp"

#include <numeric>

namespace spikehpo::snn {

std::size_t SpikeTrain::total() const {
    return std::accumulate(bits.begin(), bits.end(), std::size_t{0});
}

SpikeTrain poisson_encode(std::span<const double> image, std::size_t frames, double max_rate,
                          Rng& rng) {
    if (!(max_rate >= 0.0 && max_rate <= 1.0)) {
        throw ValidationError("max_rate must lie in [0,1]");
    }
    std::vector<double> p(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (!(image[i] >= 0.0 && image[i] <= 1.0)) {
            throw ValidationError("pixel intensity outside [0,1]");
        }
        p[i] = image[i] * max_rate;
    }
    SpikeTrain train;
    train.frames = frames;
    train.units = image.size();
    train.bits.assign(frames * image.size(), 0);
    for (std::size_t t = 0; t < frames; ++t) {
        std::uint8_t* row = train.bits.data() + t * train.units;
        for (std::size_t i = 0; i < p.size(); ++i) {
            row[i] = uniform01(rng) < p[i] ? 1 : 0;
        }
    }
    return train;
}

}  // namespace spikehpo::snn
