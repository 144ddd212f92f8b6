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

#include <cmath>
#include <limits>
#include <vector>

#include "spikehpo/lbfgs.hpp"

using namespace spikehpo;

TEST_SUITE("lbfgs") {

TEST_CASE("rosenbrock") {
    const Objective f = [](std::span<const double> x, std::span<double> g) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    LbfgsOptions opts;
    opts.max_iterations = 500;
    const auto r = lbfgs_minimize(f, {-1.2, 1.0}, opts);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.value < 1e-8);
}

TEST_CASE("quadratic converges quickly") {
    const Objective f = [](std::span<const double> x, std::span<double> g) {
        double v = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double w = static_cast<double>(i + 1);
            g[i] = 2.0 * w * (x[i] - 1.0);
            v += w * (x[i] - 1.0) * (x[i] - 1.0);
        }
        return v;
    };
    const auto r = lbfgs_minimize(f, std::vector<double>(6, 0.0));
    for (double xi : r.x) CHECK(xi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.iterations < 50);
}

TEST_CASE("non-finite region is avoided") {
    // log barrier: infinite for x <= 0
    const Objective f = [](std::span<const double> x, std::span<double> g) {
        if (x[0] <= 0.0) {
            g[0] = 0.0;
            return std::numeric_limits<double>::infinity();
        }
        g[0] = 1.0 - 1.0 / x[0];
        return x[0] - std::log(x[0]);
    };
    const auto r = lbfgs_minimize(f, {5.0});
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
}

}  // TEST_SUITE
