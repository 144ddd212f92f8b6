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
#include <functional>
#include <span>
#include <vector>

namespace spikehpo {

struct LbfgsOptions {
    std::size_t max_iterations = 50;
    std::size_t memory = 8;
    double gradient_tolerance = 1e-6;
    double relative_tolerance = 1e-10;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
};

/// Objective returning f(x) and writing df/dx into the second argument.
/// Non-finite values are treated as infeasible and rejected by the line search.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

/// Unconstrained minimization with limited-memory BFGS and Armijo backtracking.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0,
                           const LbfgsOptions& options = {});

}  // namespace spikehpo
