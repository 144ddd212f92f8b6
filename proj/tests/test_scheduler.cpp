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


#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "spikehpo/scheduler.hpp"

using namespace spikehpo;

namespace {

SearchSpace toy_space() {
    std::vector<ParamSpec> ps;
    for (const char* n : {"a", "b"}) {
        ParamSpec p;
        p.name = n;
        ps.push_back(p);
    }
    return SearchSpace(ps);
}

ScboConfig toy_config(std::size_t n_init) {
    ScboConfig c;
    c.n_init = n_init;
    c.n_cand = 100;
    c.fit_restarts = 1;
    c.fit_iterations = 15;
    return c;
}

TrialResult toy_eval(const Configuration& c, std::uint64_t) {
    const double a = c.real("a");
    const double b = c.real("b");
    TrialResult r;
    r.objective = 1.0 - (a - 0.3) * (a - 0.3) - (b - 0.7) * (b - 0.7);
    r.violations = {std::max(a - 0.8, 0.0)};
    r.stopped = r.violations[0] > 0.0;
    return r;
}

class MemorySink : public TrialSink {
public:
    void record(const TrialRecord& t) override {
        if (fail_after >= 0 && static_cast<int>(lines.size()) == fail_after) {
            throw std::runtime_error("disk full at /nowhere/trials.jsonl");
        }
        lines.push_back(serialize_trial(t));
    }
    std::vector<std::string> lines;
    int fail_after = -1;
};

}  // namespace

TEST_SUITE("scheduler") {

TEST_CASE("budget validation") {
    ExperimentBudget b;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    b.max_trials = 3;
    b.workers = 0;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    b.workers = 2;
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("one worker equals the synchronous loop") {
    const std::uint64_t master = 9;
    Scbo async_opt(toy_space(), 1, toy_config(4), 21);
    ExperimentBudget budget;
    budget.max_trials = 15;
    const auto run = run_experiment(async_opt, toy_eval, budget, master);
    REQUIRE_FALSE(run.aborted);

    Scbo sync_opt(toy_space(), 1, toy_config(4), 21);
    REQUIRE(run.trials.size() == 15);
    for (const auto& got : run.trials) {
        const auto p = sync_opt.propose();
        const auto r = toy_eval(p.config, trial_seed(master, p.trial_id));
        TrialRecord t;
        t.trial_id = p.trial_id;
        t.config = p.config;
        t.origin = p.origin;
        t.restart_round = p.restart_round;
        t.objective = r.objective;
        t.violations = r.violations;
        t.stopped = r.stopped;
        t.seed = trial_seed(master, p.trial_id);
        sync_opt.update(t);
        CHECK(serialize_trial_untimed(got) == serialize_trial_untimed(t));
    }
}

TEST_CASE("trial budget and design accounting") {
    Scbo opt(toy_space(), 1, toy_config(8), 1);
    ExperimentBudget budget;
    budget.max_trials = 20;
    budget.workers = 3;
    const auto run = run_experiment(opt, toy_eval, budget, 1);
    REQUIRE(run.trials.size() == 20);
    std::set<std::int64_t> ids;
    for (const auto& t : run.trials) {
        ids.insert(t.trial_id);
        CHECK((t.trial_id < 8) == (t.origin == TrialOrigin::kDesign));
    }
    CHECK(ids.size() == 20);
    CHECK(*ids.rbegin() == 19);
}

TEST_CASE("a crashing trial is penalized and the pool continues") {
    const std::uint64_t master = 5;
    const std::uint64_t bad = trial_seed(master, 5);
    const Evaluator flaky = [&](const Configuration& c, std::uint64_t seed) {
        if (seed == bad) throw std::runtime_error("simulated worker crash");
        return toy_eval(c, seed);
    };
    Scbo opt(toy_space(), 1, toy_config(8), 2);
    ExperimentBudget budget;
    budget.max_trials = 20;
    budget.workers = 2;
    const auto run = run_experiment(opt, flaky, budget, master);
    REQUIRE(run.trials.size() == 20);
    int ok = 0;
    for (const auto& t : run.trials) {
        if (t.trial_id == 5) {
            REQUIRE(t.error.has_value());
            CHECK(*t.error == "simulated worker crash");
            CHECK(t.objective == 0.0);
            CHECK(t.violations == std::vector<double>{1.0});
        } else {
            CHECK_FALSE(t.error.has_value());
            ++ok;
        }
    }
    CHECK(ok == 19);
}

TEST_CASE("jsonl sink writes one parseable line per trial") {
    const auto dir = std::filesystem::temp_directory_path() / "spikehpo_sched_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "trials.jsonl").string();
    Scbo opt(toy_space(), 1, toy_config(4), 3);
    ExperimentBudget budget;
    budget.max_trials = 7;
    budget.workers = 2;
    RunResult run;
    {
        JsonlSink sink(path);
        run = run_experiment(opt, toy_eval, budget, 3, &sink);
    }
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto t = parse_trial(line);
        CHECK(t.trial_id == run.trials[n].trial_id);
        CHECK(t.end_time >= t.start_time);
        CHECK(serialize_trial(t) == line);
        ++n;
    }
    CHECK(n == 7);
    std::filesystem::remove_all(dir);
    try {
        JsonlSink bad("/nonexistent-dir/x/trials.jsonl");
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/x/trials.jsonl") != std::string::npos);
    }
}

TEST_CASE("sink failure aborts with the message") {
    Scbo opt(toy_space(), 1, toy_config(4), 3);
    MemorySink sink;
    sink.fail_after = 3;
    ExperimentBudget budget;
    budget.max_trials = 12;
    budget.workers = 2;
    const auto run = run_experiment(opt, toy_eval, budget, 3, &sink);
    REQUIRE(run.aborted.has_value());
    CHECK(run.aborted->find("/nowhere/trials.jsonl") != std::string::npos);
    CHECK(sink.lines.size() == 3);
    CHECK(run.trials.size() < 12);
}

TEST_CASE("asynchrony: at most one refit per completion and prompt dispatch") {
    const Evaluator slow = [](const Configuration& c, std::uint64_t seed) {
        // adversarial durations: mostly instant, sometimes long
        const int ms = (seed % 5 == 0) ? 40 : static_cast<int>(seed % 3);
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
        return toy_eval(c, seed);
    };
    Scbo opt(toy_space(), 1, toy_config(4), 4);
    ExperimentBudget budget;
    budget.max_trials = 30;
    budget.workers = 4;
    const auto run = run_experiment(opt, slow, budget, 4);
    CHECK_FALSE(run.aborted);
    CHECK(run.trials.size() == 30);
    CHECK(run.stats.max_fits_per_completion <= 1);
    CHECK(run.stats.max_dispatch_latency_seconds < 1.0);
    std::set<std::int64_t> ids;
    for (const auto& t : run.trials) CHECK(ids.insert(t.trial_id).second);
}

TEST_CASE("wall-clock budget") {
    const Evaluator slow = [](const Configuration& c, std::uint64_t seed) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        return toy_eval(c, seed);
    };
    Scbo opt(toy_space(), 1, toy_config(4), 4);
    ExperimentBudget budget;
    budget.max_wall_seconds = 0.3;
    budget.workers = 2;
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = run_experiment(opt, slow, budget, 4);
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(run.trials.size() >= 2);
    CHECK(took < 2.0);
}

}  // TEST_SUITE
