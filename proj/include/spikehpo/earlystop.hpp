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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spikehpo {

/// Spike-activity criterion on one monitored layer: a sample is "silent" when the
/// layer emits fewer than `alpha` spikes; training stops once the silent share of
/// an epoch exceeds `beta`.
///
/// `beta` is read as the decimal it prints as (0.1 means exactly 1/10), and all
/// comparisons against count/S are exact.
struct StopCriterion {
    std::string layer;
    std::int64_t alpha = 0;
    double beta = 0.0;

    void validate() const;
};

/// Largest silent-sample count c with c / samples <= beta.
std::int64_t max_silent_samples(double beta, std::int64_t samples);

/// max(count / samples - beta, 0), correctly rounded from the exact rational value.
double violation_value(std::int64_t count, std::int64_t samples, double beta);

struct StopOutcome {
    bool stopped = false;
    std::map<std::string, std::int64_t> counts;  // silent samples in the current epoch
    std::int64_t samples_total = 0;              // S, samples per epoch
    std::int64_t samples_processed = 0;          // over all epochs
    std::int64_t epoch_samples = 0;              // processed in the current epoch
    std::vector<double> violations;              // one per criterion, criteria order

    double violation_sum() const;
};

/// Streaming form of the early-stopping loop. Per sample: one observe() per
/// monitored layer, then finish_sample(), then should_stop().
class EarlyStopMonitor {
public:
    EarlyStopMonitor(std::vector<StopCriterion> criteria, std::int64_t samples_per_epoch);

    const std::vector<StopCriterion>& criteria() const { return criteria_; }

    /// Resets per-epoch silent counters.
    void begin_epoch();
    /// Counts the sample as silent for `layer` iff spike_sum < alpha.
    void observe(std::string_view layer, std::int64_t spike_sum);
    void finish_sample();
    /// True iff some layer has count / S > beta.
    bool should_stop() const;
    /// Per-criterion violation values for the current counters.
    std::vector<double> violations() const;

    /// Snapshot with violations filled in; `stopped` records whether training halted.
    StopOutcome outcome(bool stopped) const;

private:
    std::size_t index_of(std::string_view layer) const;

    std::vector<StopCriterion> criteria_;
    std::vector<std::int64_t> max_allowed_;
    StopOutcome state_;
};

}  // namespace spikehpo
