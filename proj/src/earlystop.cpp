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

#include "spikehpo/earlystop.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "spikehpo/common.hpp"

namespace spikehpo {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// The decimal that `x` prints as (shortest round-trip form), as an exact rational.
cpp_rational decimal_rational(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) {
        throw ValidationError("cannot format beta");
    }
    const std::string text(buf, end);
    const auto epos = text.find_first_of("eE");
    const std::string mantissa = text.substr(0, epos);
    long exponent = epos == std::string::npos ? 0 : std::stol(text.substr(epos + 1));

    cpp_int digits = 0;
    bool negative = false;
    bool after_point = false;
    for (char c : mantissa) {
        if (c == '-') {
            negative = true;
        } else if (c == '.') {
            after_point = true;
        } else {
            digits = digits * 10 + (c - '0');
            if (after_point) {
                --exponent;
            }
        }
    }
    if (negative) {
        digits = -digits;
    }
    cpp_int scale = 1;
    for (long i = 0; i < std::labs(exponent); ++i) {
        scale *= 10;
    }
    return exponent >= 0 ? cpp_rational(digits * scale) : cpp_rational(digits, scale);
}

}  // namespace

void StopCriterion::validate() const {
    if (layer.empty()) {
        throw ValidationError("stop criterion has an empty layer name");
    }
    if (alpha < 0) {
        throw ValidationError("stop criterion '" + layer + "': alpha must be >= 0");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ValidationError("stop criterion '" + layer + "': beta must lie in [0,1]");
    }
}

std::int64_t max_silent_samples(double beta, std::int64_t samples) {
    const cpp_rational limit = decimal_rational(beta) * samples;
    // floor of a non-negative rational
    const cpp_int q = boost::multiprecision::numerator(limit) /
                      boost::multiprecision::denominator(limit);
    return static_cast<std::int64_t>(q);
}

double violation_value(std::int64_t count, std::int64_t samples, double beta) {
    if (samples <= 0) {
        throw ValidationError("violation requires a positive sample count");
    }
    const cpp_rational excess = cpp_rational(count, samples) - decimal_rational(beta);
    if (excess <= 0) {
        return 0.0;
    }
    return excess.convert_to<double>();
}

double StopOutcome::violation_sum() const {
    return std::accumulate(violations.begin(), violations.end(), 0.0);
}

EarlyStopMonitor::EarlyStopMonitor(std::vector<StopCriterion> criteria,
                                   std::int64_t samples_per_epoch)
    : criteria_(std::move(criteria)) {
    if (samples_per_epoch <= 0) {
        throw ValidationError("early stopping needs a positive number of samples per epoch");
    }
    std::set<std::string> layers;
    for (const auto& c : criteria_) {
        c.validate();
        if (!layers.insert(c.layer).second) {
            throw ValidationError("duplicate stop criterion for layer '" + c.layer + "'");
        }
        max_allowed_.push_back(max_silent_samples(c.beta, samples_per_epoch));
        state_.counts[c.layer] = 0;
    }
    state_.samples_total = samples_per_epoch;
}

void EarlyStopMonitor::begin_epoch() {
    for (auto& [layer, count] : state_.counts) {
        count = 0;
    }
    state_.epoch_samples = 0;
}

std::size_t EarlyStopMonitor::index_of(std::string_view layer) const {
    for (std::size_t i = 0; i < criteria_.size(); ++i) {
        if (criteria_[i].layer == layer) {
            return i;
        }
    }
    throw ValidationError("no stop criterion for layer '" + std::string(layer) + "'");
}

void EarlyStopMonitor::observe(std::string_view layer, std::int64_t spike_sum) {
    const auto& c = criteria_[index_of(layer)];
    if (spike_sum < c.alpha) {
        ++state_.counts[c.layer];
    }
}

void EarlyStopMonitor::finish_sample() {
    ++state_.samples_processed;
    ++state_.epoch_samples;
}

bool EarlyStopMonitor::should_stop() const {
    for (std::size_t i = 0; i < criteria_.size(); ++i) {
        if (state_.counts.at(criteria_[i].layer) > max_allowed_[i]) {
            return true;
        }
    }
    return false;
}

std::vector<double> EarlyStopMonitor::violations() const {
    std::vector<double> out;
    out.reserve(criteria_.size());
    for (const auto& c : criteria_) {
        out.push_back(violation_value(state_.counts.at(c.layer), state_.samples_total, c.beta));
    }
    return out;
}

StopOutcome EarlyStopMonitor::outcome(bool stopped) const {
    StopOutcome out = state_;
    out.stopped = stopped;
    out.violations = violations();
    return out;
}

}  // namespace spikehpo
