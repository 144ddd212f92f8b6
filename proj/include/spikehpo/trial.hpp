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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spikehpo/searchspace.hpp"

namespace spikehpo {

/// Where a trial's configuration came from.
enum class TrialOrigin { kDesign, kScbo, kRestart };

std::string_view to_string(TrialOrigin origin);
TrialOrigin parse_origin(std::string_view text);

struct TrialRecord {
    std::int64_t trial_id = 0;
    Configuration config;
    UnitPoint unit;  // not serialized; recomputed from config
    double objective = 0.0;
    std::vector<double> violations;
    bool stopped = false;
    std::int64_t samples_processed = 0;
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
    double start_time = 0.0;  // seconds since the Unix epoch, UTC
    double end_time = 0.0;
    int worker_id = 0;
    std::uint64_t seed = 0;
    std::optional<std::string> error;
    TrialOrigin origin = TrialOrigin::kDesign;
    std::size_t restart_round = 0;  // trust-region restarts before the proposal

    bool feasible() const;
    double total_violation() const;
};

/// What an evaluation of one configuration reports back.
struct TrialResult {
    double objective = 0.0;
    std::vector<double> violations;
    bool stopped = false;
    std::int64_t samples_processed = 0;
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
};

/// Strict weak ordering used for the incumbent: feasible trials first by higher
/// objective, otherwise lower total violation, then higher objective; remaining
/// ties go to the lower trial_id.
bool better_trial(const TrialRecord& a, const TrialRecord& b);

/// Current wall-clock time in the TrialRecord time base.
double now_seconds();

/// "2026-01-02T03:04:05.678901Z"
std::string format_rfc3339(double seconds);
double parse_rfc3339(std::string_view text);

/// One JSON object, no trailing newline.
std::string serialize_trial(const TrialRecord& trial);
/// Throws ValidationError on malformed input.
TrialRecord parse_trial(std::string_view line);

/// serialize_trial with the timing fields (timestamps, durations) removed.
std::string serialize_trial_untimed(const TrialRecord& trial);

}  // namespace spikehpo
