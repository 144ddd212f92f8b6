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

#include "spikehpo/trial.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <json.hpp>
#include <numeric>

namespace spikehpo {

using Json = nlohmann::ordered_json;

std::string_view to_string(TrialOrigin origin) {
    switch (origin) {
        case TrialOrigin::kDesign:
            return "design";
        case TrialOrigin::kScbo:
            return "scbo";
        case TrialOrigin::kRestart:
            return "restart";
    }
    return "design";
}

TrialOrigin parse_origin(std::string_view text) {
    if (text == "design") return TrialOrigin::kDesign;
    if (text == "scbo") return TrialOrigin::kScbo;
    if (text == "restart") return TrialOrigin::kRestart;
    throw ValidationError("unknown trial origin '" + std::string(text) + "'");
}

bool TrialRecord::feasible() const {
    for (double v : violations) {
        if (v > 0.0) {
            return false;
        }
    }
    return true;
}

double TrialRecord::total_violation() const {
    return std::accumulate(violations.begin(), violations.end(), 0.0);
}

bool better_trial(const TrialRecord& a, const TrialRecord& b) {
    const bool fa = a.feasible();
    const bool fb = b.feasible();
    if (fa != fb) {
        return fa;
    }
    if (!fa) {
        const double va = a.total_violation();
        const double vb = b.total_violation();
        if (va != vb) {
            return va < vb;
        }
    }
    if (a.objective != b.objective) {
        return a.objective > b.objective;
    }
    return a.trial_id < b.trial_id;
}

double now_seconds() {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::system_clock::now().time_since_epoch());
    return static_cast<double>(us.count()) * 1e-6;
}

std::string format_rfc3339(double seconds) {
    auto whole = static_cast<std::int64_t>(std::floor(seconds));
    auto micros = static_cast<std::int64_t>(std::llround((seconds - static_cast<double>(whole)) * 1e6));
    if (micros >= 1000000) {
        ++whole;
        micros -= 1000000;
    }
    const auto t = static_cast<std::time_t>(whole);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<long long>(micros));
    return buf;
}

double parse_rfc3339(std::string_view text) {
    std::tm tm{};
    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double sec = 0.0;
    char zone = 0;
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf%c", &year, &month, &day, &hour, &minute, &sec,
                    &zone) != 7 ||
        zone != 'Z') {
        throw ValidationError("bad RFC 3339 UTC timestamp '" + s + "'");
    }
    tm.tm_year = year - 1900;
    tm.tm_mon = month - 1;
    tm.tm_mday = day;
    tm.tm_hour = hour;
    tm.tm_min = minute;
    tm.tm_sec = 0;
    return static_cast<double>(timegm(&tm)) + sec;
}

namespace {

Json config_json(const Configuration& config) {
    Json out = Json::object();
    for (const auto& [name, value] : config.values) {
        std::visit([&](const auto& v) { out[name] = v; }, value);
    }
    return out;
}

Json trial_json(const TrialRecord& t, bool timed) {
    Json j;
    j["trial_id"] = t.trial_id;
    j["worker_id"] = t.worker_id;
    j["origin"] = std::string(to_string(t.origin));
    j["restart_round"] = t.restart_round;
    j["config"] = config_json(t.config);
    j["objective"] = t.objective;
    j["violations"] = t.violations;
    j["stopped"] = t.stopped;
    j["samples_processed"] = t.samples_processed;
    if (timed) {
        j["train_seconds"] = t.train_seconds;
        j["eval_seconds"] = t.eval_seconds;
        j["start_time"] = format_rfc3339(t.start_time);
        j["end_time"] = format_rfc3339(t.end_time);
    }
    j["seed"] = t.seed;
    if (t.error) {
        j["error"] = *t.error;
    }
    return j;
}

}  // namespace

std::string serialize_trial(const TrialRecord& trial) {
    return trial_json(trial, true).dump();
}

std::string serialize_trial_untimed(const TrialRecord& trial) {
    return trial_json(trial, false).dump();
}

TrialRecord parse_trial(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("trial record is not valid JSON: ") + e.what());
    }
    try {
        TrialRecord t;
        t.trial_id = j.at("trial_id").get<std::int64_t>();
        t.worker_id = j.at("worker_id").get<int>();
        t.origin = parse_origin(j.value("origin", std::string("design")));
        t.restart_round = j.value("restart_round", std::size_t{0});
        for (const auto& [name, value] : j.at("config").items()) {
            if (value.is_string()) {
                t.config.values[name] = value.get<std::string>();
            } else if (value.is_number_integer()) {
                t.config.values[name] = value.get<std::int64_t>();
            } else if (value.is_number_float()) {
                t.config.values[name] = value.get<double>();
            } else {
                throw ValidationError("config value '" + name + "' has an unsupported type");
            }
        }
        t.objective = j.at("objective").get<double>();
        t.violations = j.at("violations").get<std::vector<double>>();
        t.stopped = j.at("stopped").get<bool>();
        t.samples_processed = j.at("samples_processed").get<std::int64_t>();
        t.train_seconds = j.at("train_seconds").get<double>();
        t.eval_seconds = j.at("eval_seconds").get<double>();
        t.start_time = parse_rfc3339(j.at("start_time").get<std::string>());
        t.end_time = parse_rfc3339(j.at("end_time").get<std::string>());
        t.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("error")) {
            t.error = j.at("error").get<std::string>();
        }
        return t;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed trial record: ") + e.what());
    }
}

}  // namespace spikehpo
