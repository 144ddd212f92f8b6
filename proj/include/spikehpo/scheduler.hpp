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
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spikehpo/optimizer.hpp"
#include "spikehpo/trial.hpp"

namespace spikehpo {

struct ExperimentBudget {
    std::size_t max_trials = 0;      // 0: unbounded
    double max_wall_seconds = 0.0;   // 0: unbounded
    std::size_t workers = 1;

    void validate() const;
};

/// Evaluates one configuration with the given seed. Runs on worker threads, so
/// it must not touch shared mutable state. Exceptions count as crashed trials.
using Evaluator = std::function<TrialResult(const Configuration&, std::uint64_t seed)>;

class TrialSink {
public:
    virtual ~TrialSink() = default;
    virtual void record(const TrialRecord& trial) = 0;
};

/// Appends one JSON line per trial and flushes it immediately.
class JsonlSink : public TrialSink {
public:
    explicit JsonlSink(std::string path);
    void record(const TrialRecord& trial) override;
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
};

struct RunStats {
    std::size_t completions = 0;
    /// Largest number of surrogate refits between two consecutive completions.
    std::size_t max_fits_per_completion = 0;
    /// Largest delay between a worker reporting and receiving its next job.
    double max_dispatch_latency_seconds = 0.0;
};

struct RunResult {
    std::vector<TrialRecord> trials;  // completion order
    std::optional<std::string> aborted;
    RunStats stats;
};

/// Seed handed to the evaluator of `trial_id`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id);

/// Asynchronous loop: every idle worker immediately gets the optimizer's next
/// proposal while budget remains; completions are fed back one at a time.
/// With one worker this is exactly the synchronous propose/evaluate/update loop.
/// A coordinator failure stops dispatching, drains in-flight work and sets
/// `aborted`. Sink I/O failures abort the same way.
RunResult run_experiment(Scbo& optimizer, const Evaluator& evaluate,
                         const ExperimentBudget& budget, std::uint64_t master_seed,
                         TrialSink* sink = nullptr);

}  // namespace spikehpo
