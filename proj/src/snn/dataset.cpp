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

#include "spikehpo/snn/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "spikehpo/common.hpp"

namespace spikehpo::snn {

void Dataset::validate() const {
    if (width == 0 || height == 0) {
        throw ValidationError("dataset: empty image shape");
    }
    if (classes < 2) {
        throw ValidationError("dataset: need at least two classes");
    }
    if (images.size() != labels.size()) {
        throw ValidationError("dataset: image and label counts differ");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != pixels()) {
            throw ValidationError("dataset: image " + std::to_string(i) + " has the wrong size");
        }
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
            throw ValidationError("dataset: label of sample " + std::to_string(i) +
                                  " out of range");
        }
    }
}

namespace {

Dataset synthetic_split(const SyntheticSpec& spec, std::size_t count, Rng& rng) {
    Dataset d;
    d.width = spec.width;
    d.height = spec.height;
    d.classes = spec.classes;
    d.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        d.labels[i] = static_cast<int>(i % spec.classes);
    }
    std::shuffle(d.labels.begin(), d.labels.end(), rng);

    const double side = static_cast<double>(std::min(spec.width, spec.height));
    const double radius = 0.3 * side;
    const double sigma = 0.15 * side;
    const double mid_x = 0.5 * static_cast<double>(spec.width - 1);
    const double mid_y = 0.5 * static_cast<double>(spec.height - 1);
    std::normal_distribution<double> jitter(0.0, 0.5);

    for (int label : d.labels) {
        const double angle = 2.0 * std::numbers::pi * label / static_cast<double>(spec.classes);
        const double cx = mid_x + radius * std::cos(angle) + jitter(rng);
        const double cy = mid_y + radius * std::sin(angle) + jitter(rng);
        const double amplitude = 0.8 + 0.2 * uniform01(rng);
        std::vector<double> img(d.pixels());
        for (std::size_t y = 0; y < spec.height; ++y) {
            for (std::size_t x = 0; x < spec.width; ++x) {
                const double dx = static_cast<double>(x) - cx;
                const double dy = static_cast<double>(y) - cy;
                const double blob = amplitude * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
                img[y * spec.width + x] = std::clamp(blob + 0.1 * uniform01(rng), 0.0, 1.0);
            }
        }
        d.images.push_back(std::move(img));
    }
    return d;
}

std::uint32_t read_be32(std::istream& in, const std::string& path) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
        throw ValidationError(path + ": truncated IDX header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
           std::uint32_t{b[3]};
}

}  // namespace

DatasetSplits make_synthetic(const SyntheticSpec& spec) {
    if (spec.classes < 2) throw ValidationError("synthetic dataset: classes must be >= 2");
    if (spec.width == 0 || spec.height == 0) {
        throw ValidationError("synthetic dataset: width and height must be positive");
    }
    if (spec.train == 0) throw ValidationError("synthetic dataset: train split is empty");
    Rng rng(spec.seed);
    DatasetSplits s;
    s.train = synthetic_split(spec, spec.train, rng);
    s.valid = synthetic_split(spec, spec.valid, rng);
    s.test = synthetic_split(spec, spec.test, rng);
    return s;
}

Dataset read_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t limit) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw ValidationError("cannot open " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw ValidationError("cannot open " + labels_path);

    if (read_be32(img, images_path) != 2051) {
        throw ValidationError(images_path + ": not an IDX3 image file (magic 2051)");
    }
    if (read_be32(lab, labels_path) != 2049) {
        throw ValidationError(labels_path + ": not an IDX1 label file (magic 2049)");
    }
    std::size_t n = read_be32(img, images_path);
    const std::size_t rows = read_be32(img, images_path);
    const std::size_t cols = read_be32(img, images_path);
    if (read_be32(lab, labels_path) != n) {
        throw ValidationError(labels_path + ": label count differs from " + images_path);
    }
    if (limit > 0) n = std::min(n, limit);

    Dataset d;
    d.width = cols;
    d.height = rows;
    std::vector<unsigned char> buf(rows * cols);
    int max_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
            throw ValidationError(images_path + ": truncated image data");
        }
        std::vector<double> pixels(buf.size());
        for (std::size_t k = 0; k < buf.size(); ++k) {
            pixels[k] = buf[k] / 255.0;
        }
        d.images.push_back(std::move(pixels));
        char label = 0;
        if (!lab.get(label)) throw ValidationError(labels_path + ": truncated label data");
        const int value = static_cast<unsigned char>(label);
        d.labels.push_back(value);
        max_label = std::max(max_label, value);
    }
    d.classes = static_cast<std::size_t>(max_label) + 1;
    return d;
}

}  // namespace spikehpo::snn
