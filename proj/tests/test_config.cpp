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

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "spikehpo/config.hpp"

using namespace spikehpo;
using Json = nlohmann::ordered_json;

namespace {

std::string bundled_text() {
    std::ifstream in(std::string(SPIKEHPO_SOURCE_DIR) + "/configs/exp1-desk.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json bundled() { return Json::parse(bundled_text()); }

std::vector<std::string> errors_of(const Json& j) {
    try {
        parse_config(j.dump());
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& a, const std::string& b) {
    for (const auto& e : errors) {
        if (e.find(a) != std::string::npos && e.find(b) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("bundled profile") {
    const auto c = parse_config(bundled_text());
    CHECK(c.name == "exp1-desk");
    CHECK(c.budget.max_trials == 200);
    CHECK(c.budget.workers == 4);
    CHECK(c.space.dimension() == 18);
    const auto& map = c.space.param(c.space.index_of("map_size"));
    CHECK(map.upper == 200);
    REQUIRE(c.early_stopping.size() == 2);
    CHECK(c.early_stopping[0].layer == "excitatory");
    CHECK(c.early_stopping[0].alpha == 5);
    CHECK(c.early_stopping[0].beta == 0.1);
    CHECK(c.early_stopping[1].layer == "inhibitory");
    CHECK(c.early_stopping[1].alpha == 1);
    CHECK(c.early_stopping[1].beta == 0.1);
    CHECK_NOTHROW(validate_experiment(c));
    const auto data = load_dataset(c.simulator.dataset);
    CHECK(data.train.size() == 300);
    CHECK(data.train.classes == 3);
}

TEST_CASE("bundled space matches the built-in default") {
    const auto c = parse_config(bundled_text());
    const auto d = default_stdp_space();
    REQUIRE(c.space.dimension() == d.dimension());
    for (std::size_t i = 0; i < d.dimension(); ++i) {
        const auto& a = c.space.param(i);
        const auto& b = d.param(i);
        CHECK(a.name == b.name);
        CHECK(a.kind == b.kind);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
        CHECK(a.sampler == b.sampler);
        CHECK(a.choices == b.choices);
    }
}

TEST_CASE("unknown keys are rejected") {
    auto j = bundled();
    j["budget"]["maxtrials"] = 3;
    j["surprise"] = true;
    const auto errs = errors_of(j);
    CHECK(mentions(errs, "budget.maxtrials", "unknown"));
    CHECK(mentions(errs, "surprise", "unknown"));
}

TEST_CASE("missing bound names the parameter and field") {
    auto j = bundled();
    j["search_space"][2].erase("upper");
    const auto errs = errors_of(j);
    REQUIRE_FALSE(errs.empty());
    CHECK(mentions(errs, "map_size", "upper"));
}

TEST_CASE("type and range errors are collected") {
    auto j = bundled();
    j["seed"] = "seven";
    j["budget"]["workers"] = 0;
    j["early_stopping"][0]["beta"] = 1.5;
    const auto errs = errors_of(j);
    CHECK(errs.size() >= 3);
    CHECK(mentions(errs, "seed", ""));
    CHECK(mentions(errs, "workers", ""));
    CHECK(mentions(errs, "beta", ""));
}

TEST_CASE("simulator parameters must be searched or fixed") {
    auto j = bundled();
    j["search_space"].erase(0);
    CHECK_THROWS_AS(parse_config(j.dump()), ConfigError);
    j["simulator"]["fixed"] = {{"lambda_minus", 0.001}};
    CHECK_NOTHROW(validate_experiment(parse_config(j.dump())));

    auto twice = bundled();
    twice["simulator"]["fixed"] = {{"map_size", 40}};
    CHECK_THROWS_AS(validate_experiment(parse_config(twice.dump())), ConfigError);

    auto layer = bundled();
    layer["early_stopping"][0]["layer"] = "output";
    CHECK_THROWS_AS(validate_experiment(parse_config(layer.dump())), ConfigError);
}

TEST_CASE("dump and parse round trip") {
    const auto c = parse_config(bundled_text());
    const auto text = dump_config(c);
    const auto again = parse_config(text);
    CHECK(dump_config(again) == text);
    CHECK(again.scbo.length_min == c.scbo.length_min);
    CHECK(again.seed == c.seed);
}

TEST_CASE("malformed json") {
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

}  // TEST_SUITE
