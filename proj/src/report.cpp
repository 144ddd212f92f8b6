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

#include "spikehpo/report.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace spikehpo {

using Json = nlohmann::ordered_json;

RunSummary summarize(const std::vector<TrialRecord>& trials) {
    if (trials.empty()) {
        throw ValidationError("no trials to summarize");
    }
    RunSummary s;
    s.trials = trials.size();
    double all_seconds = 0.0;
    double stopped_seconds = 0.0;
    const TrialRecord* best = &trials.front();
    for (const auto& t : trials) {
        const double seconds = t.train_seconds + t.eval_seconds;
        all_seconds += seconds;
        if (t.stopped) {
            ++s.stopped;
            stopped_seconds += seconds;
        }
        if (t.feasible()) ++s.feasible;
        if (t.error) ++s.errors;
        s.restarts = std::max(s.restarts, t.restart_round);
        if (better_trial(t, *best)) best = &t;
    }
    s.stopped_fraction = static_cast<double>(s.stopped) / static_cast<double>(s.trials);
    s.stopped_time_share = all_seconds > 0.0 ? stopped_seconds / all_seconds : 0.0;
    s.best_trial_id = best->trial_id;
    s.best_objective = best->objective;
    s.best_feasible = best->feasible();
    s.best_config = best->config;
    return s;
}

std::string summary_json(const RunSummary& s) {
    Json j;
    j["trials"] = s.trials;
    j["stopped"] = s.stopped;
    j["stopped_fraction"] = s.stopped_fraction;
    j["stopped_time_share"] = s.stopped_time_share;
    j["feasible"] = s.feasible;
    j["errors"] = s.errors;
    j["restarts"] = s.restarts;
    j["best_trial_id"] = s.best_trial_id;
    j["best_objective"] = s.best_objective;
    j["best_feasible"] = s.best_feasible;
    Json config = Json::object();
    for (const auto& [name, value] : s.best_config.values) {
        std::visit([&](const auto& v) { config[name] = v; }, value);
    }
    j["best_config"] = std::move(config);
    return j.dump(2) + "\n";
}

LogReadResult read_trial_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read trial log " + path);
    }
    LogReadResult out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.trials.push_back(parse_trial(line));
        } catch (const ValidationError& e) {
            ++out.skipped;
            out.warnings.push_back(path + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

namespace {

std::string number(double v) {
    return Json(v).dump();
}

}  // namespace

std::string best_so_far_csv(const std::vector<TrialRecord>& trials) {
    std::ostringstream out;
    out << "index,trial_id,objective,feasible,best_trial_id,best_objective,best_feasible\n";
    const TrialRecord* best = nullptr;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        if (best == nullptr || better_trial(t, *best)) best = &t;
        out << i << ',' << t.trial_id << ',' << number(t.objective) << ','
            << (t.feasible() ? 1 : 0) << ',' << best->trial_id << ',' << number(best->objective)
            << ',' << (best->feasible() ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string intervals_csv(const std::vector<TrialRecord>& trials) {
    std::ostringstream out;
    out << "trial_id,worker_id,start_time,end_time,start_offset_seconds,end_offset_seconds,"
           "objective,stopped\n";
    double origin = 0.0;
    if (!trials.empty()) {
        origin = std::min_element(trials.begin(), trials.end(), [](const auto& a, const auto& b) {
                     return a.start_time < b.start_time;
                 })->start_time;
    }
    for (const auto& t : trials) {
        out << t.trial_id << ',' << t.worker_id << ',' << format_rfc3339(t.start_time) << ','
            << format_rfc3339(t.end_time) << ',' << number(t.start_time - origin) << ','
            << number(t.end_time - origin) << ',' << number(t.objective) << ','
            << (t.stopped ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace spikehpo
