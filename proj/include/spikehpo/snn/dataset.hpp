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

namespace spikehpo::snn {

/// Labeled intensity images in [0,1], flattened row-major.
struct Dataset {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t classes = 0;
    std::vector<std::vector<double>> images;
    std::vector<int> labels;

    std::size_t size() const { return images.size(); }
    std::size_t pixels() const { return width * height; }
    void validate() const;
};

struct DatasetSplits {
    Dataset train;
    Dataset valid;
    Dataset test;
};

struct SyntheticSpec {
    std::size_t classes = 3;
    std::size_t width = 8;
    std::size_t height = 8;
    std::size_t train = 300;
    std::size_t valid = 100;
    std::size_t test = 100;
    std::uint64_t seed = 1;
};

/// One Gaussian blob per class, centers spread evenly on a ring so different
/// classes barely overlap; per-sample jitter of the center and additive noise.
DatasetSplits make_synthetic(const SyntheticSpec& spec);

/// Reads an IDX3 image file and IDX1 label file (big-endian, magic 2051 / 2049).
/// `limit` > 0 keeps only the first `limit` samples. Throws ValidationError.
Dataset read_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t limit = 0);

}  // namespace spikehpo::snn
