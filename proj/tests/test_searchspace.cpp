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

#include <algorithm>
#include <cmath>
#include <vector>

#include "spikehpo/searchspace.hpp"

using namespace spikehpo;

namespace {

ParamSpec numeric(ParamKind kind, double lo, double hi, Sampler s) {
    ParamSpec p;
    p.name = "p";
    p.kind = kind;
    p.lower = lo;
    p.upper = hi;
    p.sampler = s;
    return p;
}

ParamSpec categorical(std::vector<std::string> choices) {
    ParamSpec p;
    p.name = "c";
    p.kind = ParamKind::kCategorical;
    p.choices = std::move(choices);
    p.sampler = Sampler::kRandomChoice;
    return p;
}

// Kolmogorov-Smirnov distance of samples against Uniform(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = (xs[i] - lo) / (hi - lo);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

}  // namespace

TEST_SUITE("searchspace") {

TEST_CASE("warp examples") {
    const auto log = numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kLogUniform);
    CHECK(std::get<double>(warp(log, 0.5)) == doctest::Approx(1e-3).epsilon(1e-12));

    const auto disc = numeric(ParamKind::kDiscrete, 20, 2000, Sampler::kUniform);
    CHECK(std::get<std::int64_t>(warp(disc, 0.0)) == 20);
    CHECK(std::get<std::int64_t>(warp(disc, 1.0)) == 2000);

    const auto rlog = numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kRLogUniform);
    CHECK(std::get<double>(warp(rlog, 0.5)) == doctest::Approx(9.1e-3).epsilon(1e-12));
    CHECK(std::get<double>(warp(rlog, 0.0)) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(std::get<double>(warp(rlog, 1.0)) == doctest::Approx(1e-2).epsilon(1e-12));

    const auto cat = categorical({"a", "b", "c", "d"});
    CHECK(std::get<std::string>(warp(cat, 0.0)) == "a");
    CHECK(std::get<std::string>(warp(cat, 0.25)) == "b");
    CHECK(std::get<std::string>(warp(cat, 0.6)) == "c");
    CHECK(std::get<std::string>(warp(cat, 1.0)) == "d");
}

TEST_CASE("unwarp examples") {
    const auto log = numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kLogUniform);
    CHECK(unwarp(log, 1e-3) == doctest::Approx(0.5).epsilon(1e-12));

    const auto cat = categorical({"a", "b", "c", "d"});
    CHECK(unwarp(cat, std::string("c")) == doctest::Approx(0.625));

    const auto rest = numeric(ParamKind::kContinuous, -70, -60, Sampler::kUniform);
    CHECK(unwarp(rest, -60.8) == doctest::Approx(0.92).epsilon(1e-12));

    CHECK_THROWS_AS(unwarp(rest, -59.0), ValidationError);
    CHECK_THROWS_AS(unwarp(cat, std::string("z")), ValidationError);
    try {
        unwarp(rest, -80.0);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'p'") != std::string::npos);
    }
}

TEST_CASE("round trip and monotonicity") {
    std::vector<ParamSpec> specs = {
        numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kLogUniform),
        numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kRLogUniform),
        numeric(ParamKind::kContinuous, -70, -60, Sampler::kUniform),
        numeric(ParamKind::kContinuous, 5, 5000, Sampler::kLogUniform),
    };
    Rng rng(1);
    for (const auto& s : specs) {
        double prev = -INFINITY;
        for (int i = 0; i <= 1000; ++i) {
            const double u = i / 1000.0;
            const double v = std::get<double>(warp(s, u));
            CHECK(v >= prev);
            prev = v;
        }
        for (int i = 0; i < 500; ++i) {
            const double v = s.lower + (s.upper - s.lower) * uniform01(rng);
            const double u = unwarp(s, v);
            CHECK(std::abs(unwarp(s, warp(s, u)) - u) < 1e-12);
        }
    }
    const auto disc = numeric(ParamKind::kDiscrete, 0, 20, Sampler::kUniform);
    std::int64_t prev = -1;
    for (int i = 0; i <= 1000; ++i) {
        const auto v = std::get<std::int64_t>(warp(disc, i / 1000.0));
        CHECK(v >= prev);
        prev = v;
    }
    for (std::int64_t v = 0; v <= 20; ++v) {
        CHECK(std::get<std::int64_t>(warp(disc, unwarp(disc, v))) == v);
    }
    const auto logdisc = numeric(ParamKind::kDiscrete, 1, 300, Sampler::kLogUniform);
    for (std::int64_t v = 1; v <= 300; ++v) {
        CHECK(std::get<std::int64_t>(warp(logdisc, unwarp(logdisc, v))) == v);
    }
    const auto cat = categorical({"average", "max", "2-gram", "3-gram"});
    for (const auto& c : cat.choices) {
        CHECK(std::get<std::string>(warp(cat, unwarp(cat, c))) == c);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(numeric(ParamKind::kContinuous, 1, 1, Sampler::kUniform).validate(),
                    ValidationError);
    CHECK_THROWS_AS(numeric(ParamKind::kContinuous, 0, 1, Sampler::kLogUniform).validate(),
                    ValidationError);
    CHECK_THROWS_AS(numeric(ParamKind::kContinuous, 0, 1, Sampler::kRandomChoice).validate(),
                    ValidationError);
    CHECK_THROWS_AS(categorical({}).validate(), ValidationError);
    CHECK_THROWS_AS(categorical({"a", "a"}).validate(), ValidationError);
    auto bad = categorical({"a"});
    bad.sampler = Sampler::kUniform;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(SearchSpace(std::vector<ParamSpec>{}), ValidationError);
    CHECK_THROWS_AS(SearchSpace({categorical({"a"}), categorical({"b"})}), ValidationError);
}

TEST_CASE("sample_prior is deterministic and valid") {
    const SearchSpace space = default_stdp_space();
    CHECK(space.dimension() == 18);
    Rng a(42), b(42);
    const auto x = sample_prior(space, 2, a);
    const auto y = sample_prior(space, 2, b);
    CHECK(x == y);
    Rng rng(3);
    for (const auto& c : sample_prior(space, 200, rng)) {
        CHECK_NOTHROW(space.validate(c));
        const auto back = space.from_unit(space.to_unit(c));
        for (const auto& [name, value] : c.values) {
            if (const auto* d = std::get_if<double>(&value)) {
                CHECK(std::get<double>(back.values.at(name)) == doctest::Approx(*d).epsilon(1e-12));
            } else {
                CHECK(back.values.at(name) == value);
            }
        }
    }
}

TEST_CASE("default space bounds") {
    const SearchSpace space = default_stdp_space();
    const auto& map = space.param(space.index_of("map_size"));
    CHECK(map.lower == 20);
    CHECK(map.upper == 200);
    const auto& lm = space.param(space.index_of("lambda_minus"));
    CHECK(lm.sampler == Sampler::kRLogUniform);
    CHECK(space.param(space.index_of("decoder")).choices.size() == 4);
    CHECK(space.index_of("missing") == space.dimension());
}

TEST_CASE("log-uniform median and KS shape") {
    const SearchSpace space({numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kLogUniform)});
    Rng rng(2024);
    std::vector<double> xs;
    for (const auto& c : sample_prior(space, 10000, rng)) xs.push_back(c.real("p"));
    auto sorted = xs;
    std::nth_element(sorted.begin(), sorted.begin() + 5000, sorted.end());
    CHECK(sorted[5000] >= 8e-4);
    CHECK(sorted[5000] <= 1.25e-3);

    std::vector<double> logs;
    for (double x : xs) logs.push_back(std::log(x));
    const double critical = 1.628 / std::sqrt(10000.0);
    CHECK(ks_uniform(logs, std::log(1e-4), std::log(1e-2)) < critical);

    const SearchSpace rspace({numeric(ParamKind::kContinuous, 1e-4, 1e-2, Sampler::kRLogUniform)});
    std::vector<double> mirrored;
    for (const auto& c : sample_prior(rspace, 10000, rng)) {
        mirrored.push_back(std::log(1e-4 + 1e-2 - c.real("p")));
    }
    CHECK(ks_uniform(mirrored, std::log(1e-4), std::log(1e-2)) < critical);
}

}  // TEST_SUITE
