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

#include "spikehpo/scheduler.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

namespace spikehpo {

void ExperimentBudget::validate() const {
    if (workers < 1) {
        throw ValidationError("budget.workers must be at least 1");
    }
    if (max_trials == 0 && !(max_wall_seconds > 0.0)) {
        throw ValidationError("budget needs max_trials or max_wall_seconds");
    }
    if (max_wall_seconds < 0.0) {
        throw ValidationError("budget.max_wall_seconds must be >= 0");
    }
}

JsonlSink::JsonlSink(std::string path) : path_(std::move(path)), out_(path_, std::ios::trunc) {
    if (!out_) {
        throw std::runtime_error("cannot open trial log " + path_);
    }
}

void JsonlSink::record(const TrialRecord& trial) {
    out_ << serialize_trial(trial) << '\n';
    out_.flush();
    if (!out_) {
        throw std::runtime_error("write to trial log " + path_ + " failed");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(trial_id));
}

namespace {

template <typename T>
class Channel {
public:
    void push(T value) {
        {
            std::lock_guard lock(mutex_);
            items_.push_back(std::move(value));
        }
        ready_.notify_one();
    }

    T pop() {
        std::unique_lock lock(mutex_);
        ready_.wait(lock, [&] { return !items_.empty(); });
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
    }

private:
    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<T> items_;
};

struct Job {
    Proposal proposal;
    std::uint64_t seed = 0;
};

struct Report {
    int worker = 0;
    Proposal proposal;
    std::uint64_t seed = 0;
    TrialResult result;
    std::optional<std::string> error;
    double start = 0.0;
    double end = 0.0;
};

TrialRecord make_record(Report& r, std::size_t n_constraints) {
    TrialRecord t;
    t.trial_id = r.proposal.trial_id;
    t.config = std::move(r.proposal.config);
    t.unit = std::move(r.proposal.unit);
    t.origin = r.proposal.origin;
    t.restart_round = r.proposal.restart_round;
    t.worker_id = r.worker;
    t.seed = r.seed;
    t.start_time = r.start;
    t.end_time = r.end;
    if (!r.error && r.result.violations.size() != n_constraints) {
        r.error = "evaluator returned " + std::to_string(r.result.violations.size()) +
                  " violations, expected " + std::to_string(n_constraints);
    }
    if (r.error) {
        // Crashed evaluations get the maximal penalty.
        t.error = r.error;
        t.objective = 0.0;
        t.violations.assign(n_constraints, 1.0);
        t.stopped = true;
        return t;
    }
    t.objective = r.result.objective;
    t.violations = r.result.violations;
    t.stopped = r.result.stopped;
    t.samples_processed = r.result.samples_processed;
    t.train_seconds = r.result.train_seconds;
    t.eval_seconds = r.result.eval_seconds;
    return t;
}

}  // namespace

RunResult run_experiment(Scbo& optimizer, const Evaluator& evaluate,
                         const ExperimentBudget& budget, std::uint64_t master_seed,
                         TrialSink* sink) {
    budget.validate();
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

    const std::size_t n_workers = budget.workers;
    std::vector<Channel<std::optional<Job>>> inboxes(n_workers);
    Channel<Report> reports;
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w] {
            for (;;) {
                std::optional<Job> job = inboxes[w].pop();
                if (!job) return;
                Report r;
                r.worker = static_cast<int>(w);
                r.seed = job->seed;
                r.start = now_seconds();
                try {
                    r.result = evaluate(job->proposal.config, job->seed);
                } catch (const std::exception& e) {
                    r.error = e.what();
                } catch (...) {
                    r.error = "unknown exception";
                }
                r.end = std::max(now_seconds(), r.start);
                r.proposal = std::move(job->proposal);
                reports.push(std::move(r));
            }
        });
    }

    RunResult out;
    std::set<int> idle;
    std::vector<Clock::time_point> idle_since(n_workers, Clock::now());
    for (std::size_t w = 0; w < n_workers; ++w) idle.insert(static_cast<int>(w));
    std::size_t dispatched = 0;
    std::size_t in_flight = 0;
    std::size_t fits_at_completion = optimizer.model_fits();

    const auto budget_left = [&] {
        if (out.aborted) return false;
        if (budget.max_trials > 0 && dispatched >= budget.max_trials) return false;
        if (budget.max_wall_seconds > 0.0 && elapsed() >= budget.max_wall_seconds) return false;
        return true;
    };

    for (;;) {
        while (!idle.empty() && budget_left()) {
            Proposal p;
            try {
                p = optimizer.propose();
            } catch (const std::exception& e) {
                out.aborted = std::string("optimizer failed: ") + e.what();
                break;
            }
            const int w = *idle.begin();
            idle.erase(idle.begin());
            const double latency =
                std::chrono::duration<double>(Clock::now() - idle_since[static_cast<std::size_t>(w)])
                    .count();
            if (out.stats.completions > 0) {
                out.stats.max_dispatch_latency_seconds =
                    std::max(out.stats.max_dispatch_latency_seconds, latency);
            }
            const std::uint64_t seed = trial_seed(master_seed, p.trial_id);
            inboxes[static_cast<std::size_t>(w)].push(Job{std::move(p), seed});
            ++dispatched;
            ++in_flight;
        }
        if (in_flight == 0) break;

        Report r = reports.pop();
        --in_flight;
        const int w = r.worker;
        TrialRecord t = make_record(r, optimizer.constraint_count());
        try {
            optimizer.update(t);
        } catch (const std::exception& e) {
            if (!out.aborted) out.aborted = std::string("optimizer update failed: ") + e.what();
        }
        if (sink != nullptr && !out.aborted) {
            try {
                sink->record(t);
            } catch (const std::exception& e) {
                out.aborted = e.what();
            }
        }
        out.trials.push_back(std::move(t));
        ++out.stats.completions;
        const std::size_t fits = optimizer.model_fits();
        out.stats.max_fits_per_completion =
            std::max(out.stats.max_fits_per_completion, fits - fits_at_completion);
        fits_at_completion = fits;
        idle.insert(w);
        idle_since[static_cast<std::size_t>(w)] = Clock::now();
    }

    for (auto& inbox : inboxes) inbox.push(std::nullopt);
    for (auto& t : workers) t.join();
    return out;
}

}  // namespace spikehpo
