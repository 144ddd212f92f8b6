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

#include "spikehpo/trial.hpp"

namespace spikehpo {

struct RunSummary {
    std::size_t trials = 0;
    std::size_t stopped = 0;
    double stopped_fraction = 0.0;
    /// Share of train + eval seconds spent on stopped trials.
    double stopped_time_share = 0.0;
    std::size_t feasible = 0;
    std::int64_t best_trial_id = -1;
    double best_objective = 0.0;
    bool best_feasible = false;
    Configuration best_config;
    std::size_t restarts = 0;
    std::size_t errors = 0;
};

/// Throws ValidationError on an empty trial list.
RunSummary summarize(const std::vector<TrialRecord>& trials);

/// Canonical JSON text of a summary (stable key order, trailing newline).
std::string summary_json(const RunSummary& summary);

struct LogReadResult {
    std::vector<TrialRecord> trials;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Reads a JSONL trial log, skipping (and counting) lines that do not parse.
LogReadResult read_trial_log(const std::string& path);

/// Per completion: trial, its objective and feasibility, and the incumbent so far.
std::string best_so_far_csv(const std::vector<TrialRecord>& trials);

/// Per trial: worker, start/end (absolute and relative to the first start),
/// objective and stopped flag.
std::string intervals_csv(const std::vector<TrialRecord>& trials);

}  // namespace spikehpo
