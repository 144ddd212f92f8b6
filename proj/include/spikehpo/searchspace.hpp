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
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spikehpo/common.hpp"

namespace spikehpo {

enum class ParamKind { kContinuous, kDiscrete, kCategorical };

enum class Sampler { kUniform, kLogUniform, kRLogUniform, kRandomChoice };

/// Hyperparameter families: neuron model, training rule, architecture,
/// decoder/loss, training pipeline.
enum class ParamGroup { kG1, kG2, kG3, kG4, kG5 };

std::string_view to_string(ParamKind kind);
std::string_view to_string(Sampler sampler);
std::string_view to_string(ParamGroup group);
ParamKind parse_kind(std::string_view text);
Sampler parse_sampler(std::string_view text);
ParamGroup parse_group(std::string_view text);

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::kContinuous;
    double lower = 0.0;
    double upper = 1.0;
    std::vector<std::string> choices;
    Sampler sampler = Sampler::kUniform;
    ParamGroup group = ParamGroup::kG1;

    /// Throws ValidationError naming the parameter when the spec is inconsistent.
    void validate() const;
};

/// Native value: real (continuous), integer (discrete) or choice label (categorical).
using ParamValue = std::variant<double, std::int64_t, std::string>;

struct Configuration {
    std::map<std::string, ParamValue> values;

    /// Numeric value of a continuous or discrete parameter.
    double real(const std::string& name) const;
    std::int64_t integer(const std::string& name) const;
    const std::string& choice(const std::string& name) const;
    bool contains(const std::string& name) const { return values.count(name) != 0; }

    bool operator==(const Configuration&) const = default;
};

/// Continuous part of the warp (no rounding); monotone non-decreasing in u.
double warp_continuous(const ParamSpec& spec, double u);
double unwarp_continuous(const ParamSpec& spec, double v);

/// Maps u in [0,1] to the native value through the parameter's sampler.
ParamValue warp(const ParamSpec& spec, double u);

/// Inverse of warp. Discrete and categorical values map to their bucket midpoint.
double unwarp(const ParamSpec& spec, const ParamValue& value);

/// Throws ValidationError naming the parameter if `value` is out of bounds or mistyped.
void validate_value(const ParamSpec& spec, const ParamValue& value);

class SearchSpace {
public:
    SearchSpace() = default;
    explicit SearchSpace(std::vector<ParamSpec> params);

    std::size_t dimension() const { return params_.size(); }
    const std::vector<ParamSpec>& params() const { return params_; }
    const ParamSpec& param(std::size_t i) const { return params_.at(i); }
    /// Index of the named parameter, or dimension() when absent.
    std::size_t index_of(std::string_view name) const;

    void validate(const Configuration& config) const;
    UnitPoint to_unit(const Configuration& config) const;
    Configuration from_unit(const UnitPoint& point) const;

private:
    std::vector<ParamSpec> params_;
};

std::vector<Configuration> sample_prior(const SearchSpace& space, std::size_t n, Rng& rng);

/// The 18-parameter STDP/SOM space with the map-size cap lowered for desk runs.
SearchSpace default_stdp_space(double map_size_upper = 200.0);

}  // namespace spikehpo
