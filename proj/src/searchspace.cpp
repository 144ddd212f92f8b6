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

#include "spikehpo/searchspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spikehpo {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& what) {
    throw ValidationError("parameter '" + name + "': " + what);
}

bool is_integral(double x) { return std::isfinite(x) && std::floor(x) == x; }

double clamp_bounds(const ParamSpec& spec, double x) {
    return std::clamp(x, spec.lower, spec.upper);
}

double log_warp(double lower, double upper, double u) {
    const double lo = std::log(lower);
    const double hi = std::log(upper);
    return std::exp(lo + u * (hi - lo));
}

double log_unwarp(double lower, double upper, double v) {
    const double lo = std::log(lower);
    const double hi = std::log(upper);
    return (std::log(v) - lo) / (hi - lo);
}

void check_unit(const ParamSpec& spec, double u) {
    if (!(u >= 0.0 && u <= 1.0)) {
        fail(spec.name, "unit coordinate " + std::to_string(u) + " outside [0,1]");
    }
}

double numeric(const ParamSpec& spec, const ParamValue& value) {
    if (const auto* d = std::get_if<double>(&value)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
        return static_cast<double>(*i);
    }
    fail(spec.name, "expected a numeric value");
}

}  // namespace

std::string_view to_string(ParamKind kind) {
    switch (kind) {
        case ParamKind::kContinuous:
            return "continuous";
        case ParamKind::kDiscrete:
            return "discrete";
        case ParamKind::kCategorical:
            return "categorical";
    }
    return "?";
}

std::string_view to_string(Sampler sampler) {
    switch (sampler) {
        case Sampler::kUniform:
            return "uniform";
        case Sampler::kLogUniform:
            return "loguniform";
        case Sampler::kRLogUniform:
            return "rloguniform";
        case Sampler::kRandomChoice:
            return "randomchoice";
    }
    return "?";
}

std::string_view to_string(ParamGroup group) {
    static constexpr std::string_view kNames[] = {"G1", "G2", "G3", "G4", "G5"};
    return kNames[static_cast<int>(group)];
}

ParamKind parse_kind(std::string_view text) {
    for (auto k : {ParamKind::kContinuous, ParamKind::kDiscrete, ParamKind::kCategorical}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ValidationError("unknown parameter kind '" + std::string(text) + "'");
}

Sampler parse_sampler(std::string_view text) {
    for (auto s : {Sampler::kUniform, Sampler::kLogUniform, Sampler::kRLogUniform,
                   Sampler::kRandomChoice}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw ValidationError("unknown sampler '" + std::string(text) + "'");
}

ParamGroup parse_group(std::string_view text) {
    for (auto g : {ParamGroup::kG1, ParamGroup::kG2, ParamGroup::kG3, ParamGroup::kG4,
                   ParamGroup::kG5}) {
        if (to_string(g) == text) {
            return g;
        }
    }
    throw ValidationError("unknown parameter group '" + std::string(text) + "'");
}

void ParamSpec::validate() const {
    if (name.empty()) {
        throw ValidationError("parameter with empty name");
    }
    if (kind == ParamKind::kCategorical) {
        if (sampler != Sampler::kRandomChoice) {
            fail(name, "categorical parameters use the randomchoice sampler");
        }
        if (choices.empty()) {
            fail(name, "categorical parameter needs at least one choice");
        }
        std::set<std::string> seen(choices.begin(), choices.end());
        if (seen.size() != choices.size()) {
            fail(name, "duplicate choices");
        }
        return;
    }
    if (sampler == Sampler::kRandomChoice) {
        fail(name, "randomchoice sampler requires a categorical parameter");
    }
    if (!choices.empty()) {
        fail(name, "choices are only valid for categorical parameters");
    }
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
        fail(name, "requires finite lower < upper");
    }
    if ((sampler == Sampler::kLogUniform || sampler == Sampler::kRLogUniform) && lower <= 0.0) {
        fail(name, "log-scaled samplers require lower > 0");
    }
    if (kind == ParamKind::kDiscrete && (!is_integral(lower) || !is_integral(upper))) {
        fail(name, "discrete bounds must be integers");
    }
}

double Configuration::real(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) {
        throw ValidationError("configuration has no value for '" + name + "'");
    }
    if (const auto* d = std::get_if<double>(&it->second)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
        return static_cast<double>(*i);
    }
    throw ValidationError("configuration value '" + name + "' is not numeric");
}

std::int64_t Configuration::integer(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) {
        throw ValidationError("configuration has no value for '" + name + "'");
    }
    if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
        return *i;
    }
    if (const auto* d = std::get_if<double>(&it->second); d && is_integral(*d)) {
        return static_cast<std::int64_t>(*d);
    }
    throw ValidationError("configuration value '" + name + "' is not an integer");
}

const std::string& Configuration::choice(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) {
        throw ValidationError("configuration has no value for '" + name + "'");
    }
    if (const auto* s = std::get_if<std::string>(&it->second)) {
        return *s;
    }
    throw ValidationError("configuration value '" + name + "' is not a choice label");
}

double warp_continuous(const ParamSpec& spec, double u) {
    check_unit(spec, u);
    switch (spec.sampler) {
        case Sampler::kUniform:
            return clamp_bounds(spec, spec.lower + u * (spec.upper - spec.lower));
        case Sampler::kLogUniform:
            return clamp_bounds(spec, log_warp(spec.lower, spec.upper, u));
        case Sampler::kRLogUniform:
            // Point reflection of the log-uniform warp: density piles up near `upper`.
            return clamp_bounds(
                spec, spec.lower + spec.upper - log_warp(spec.lower, spec.upper, 1.0 - u));
        case Sampler::kRandomChoice:
            break;
    }
    fail(spec.name, "categorical parameter has no continuous warp");
}

double unwarp_continuous(const ParamSpec& spec, double v) {
    double u = 0.0;
    switch (spec.sampler) {
        case Sampler::kUniform:
            u = (v - spec.lower) / (spec.upper - spec.lower);
            break;
        case Sampler::kLogUniform:
            u = log_unwarp(spec.lower, spec.upper, v);
            break;
        case Sampler::kRLogUniform:
            u = 1.0 - log_unwarp(spec.lower, spec.upper,
                                 std::max(spec.lower, spec.lower + spec.upper - v));
            break;
        case Sampler::kRandomChoice:
            fail(spec.name, "categorical parameter has no continuous warp");
    }
    return std::clamp(u, 0.0, 1.0);
}

ParamValue warp(const ParamSpec& spec, double u) {
    switch (spec.kind) {
        case ParamKind::kContinuous:
            return warp_continuous(spec, u);
        case ParamKind::kDiscrete: {
            const double x = std::floor(warp_continuous(spec, u) + 0.5);
            return static_cast<std::int64_t>(clamp_bounds(spec, x));
        }
        case ParamKind::kCategorical: {
            check_unit(spec, u);
            const auto k = spec.choices.size();
            const auto idx = std::min(static_cast<std::size_t>(std::floor(u * static_cast<double>(k))), k - 1);
            return spec.choices[idx];
        }
    }
    fail(spec.name, "unknown kind");
}

void validate_value(const ParamSpec& spec, const ParamValue& value) {
    switch (spec.kind) {
        case ParamKind::kContinuous: {
            const double v = numeric(spec, value);
            if (!(v >= spec.lower && v <= spec.upper)) {
                fail(spec.name, "value " + std::to_string(v) + " outside [" +
                                    std::to_string(spec.lower) + ", " +
                                    std::to_string(spec.upper) + "]");
            }
            return;
        }
        case ParamKind::kDiscrete: {
            const double v = numeric(spec, value);
            if (!is_integral(v)) {
                fail(spec.name, "discrete value must be an integer");
            }
            if (!(v >= spec.lower && v <= spec.upper)) {
                fail(spec.name, "value " + std::to_string(v) + " outside bounds");
            }
            return;
        }
        case ParamKind::kCategorical: {
            const auto* s = std::get_if<std::string>(&value);
            if (s == nullptr) {
                fail(spec.name, "expected a choice label");
            }
            if (std::find(spec.choices.begin(), spec.choices.end(), *s) == spec.choices.end()) {
                fail(spec.name, "unknown choice '" + *s + "'");
            }
            return;
        }
    }
}

double unwarp(const ParamSpec& spec, const ParamValue& value) {
    validate_value(spec, value);
    switch (spec.kind) {
        case ParamKind::kContinuous:
            return unwarp_continuous(spec, numeric(spec, value));
        case ParamKind::kDiscrete: {
            // Midpoint (in u) of the set of u that round to this integer.
            const double v = numeric(spec, value);
            const double lo = unwarp_continuous(spec, std::max(v - 0.5, spec.lower));
            const double hi = unwarp_continuous(spec, std::min(v + 0.5, spec.upper));
            return 0.5 * (lo + hi);
        }
        case ParamKind::kCategorical: {
            const auto& s = std::get<std::string>(value);
            const auto idx = static_cast<double>(
                std::find(spec.choices.begin(), spec.choices.end(), s) - spec.choices.begin());
            return (idx + 0.5) / static_cast<double>(spec.choices.size());
        }
    }
    fail(spec.name, "unknown kind");
}

SearchSpace::SearchSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
    if (params_.empty()) {
        throw ValidationError("search space has no parameters");
    }
    std::set<std::string> names;
    for (const auto& p : params_) {
        p.validate();
        if (!names.insert(p.name).second) {
            throw ValidationError("duplicate parameter name '" + p.name + "'");
        }
    }
}

std::size_t SearchSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) {
            return i;
        }
    }
    return params_.size();
}

void SearchSpace::validate(const Configuration& config) const {
    if (config.values.size() != params_.size()) {
        throw ValidationError("configuration has " + std::to_string(config.values.size()) +
                              " values, search space has " + std::to_string(params_.size()) +
                              " parameters");
    }
    for (const auto& p : params_) {
        auto it = config.values.find(p.name);
        if (it == config.values.end()) {
            fail(p.name, "missing from configuration");
        }
        validate_value(p, it->second);
    }
}

UnitPoint SearchSpace::to_unit(const Configuration& config) const {
    validate(config);
    UnitPoint u(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
        u[i] = unwarp(params_[i], config.values.at(params_[i].name));
    }
    return u;
}

Configuration SearchSpace::from_unit(const UnitPoint& point) const {
    if (point.size() != params_.size()) {
        throw ValidationError("unit point has dimension " + std::to_string(point.size()) +
                              ", expected " + std::to_string(params_.size()));
    }
    Configuration config;
    for (std::size_t i = 0; i < params_.size(); ++i) {
        config.values.emplace(params_[i].name, warp(params_[i], point[i]));
    }
    return config;
}

std::vector<Configuration> sample_prior(const SearchSpace& space, std::size_t n, Rng& rng) {
    std::vector<Configuration> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        UnitPoint u(space.dimension());
        for (auto& x : u) {
            x = uniform01(rng);
        }
        out.push_back(space.from_unit(u));
    }
    return out;
}

SearchSpace default_stdp_space(double map_size_upper) {
    using K = ParamKind;
    using S = Sampler;
    using G = ParamGroup;
    auto num = [](std::string name, K kind, double lo, double hi, S sampler, G group) {
        ParamSpec p;
        p.name = std::move(name);
        p.kind = kind;
        p.lower = lo;
        p.upper = hi;
        p.sampler = sampler;
        p.group = group;
        return p;
    };
    ParamSpec decoder;
    decoder.name = "decoder";
    decoder.kind = K::kCategorical;
    decoder.choices = {"average", "max", "2-gram", "3-gram"};
    decoder.sampler = S::kRandomChoice;
    decoder.group = G::kG4;

    return SearchSpace({
        num("lambda_minus", K::kContinuous, 1e-4, 1e-2, S::kRLogUniform, G::kG2),
        num("lambda_plus", K::kContinuous, 1e-4, 1e-2, S::kLogUniform, G::kG2),
        num("map_size", K::kDiscrete, 20, map_size_upper, S::kUniform, G::kG3),
        decoder,
        num("epochs", K::kDiscrete, 1, 3, S::kUniform, G::kG5),
        num("weight_norm", K::kContinuous, 78.4, 784, S::kUniform, G::kG5),
        num("exc_v_th", K::kContinuous, -59, 0, S::kUniform, G::kG1),
        num("exc_v_rest", K::kContinuous, -70, -60, S::kUniform, G::kG1),
        num("exc_tau", K::kContinuous, 5, 5000, S::kLogUniform, G::kG1),
        num("exc_t_ref", K::kDiscrete, 0, 20, S::kUniform, G::kG1),
        num("exc_theta_plus", K::kContinuous, 0.001, 0.5, S::kLogUniform, G::kG1),
        num("exc_tau_theta", K::kContinuous, 1e6, 1e7, S::kLogUniform, G::kG1),
        num("exc_strength", K::kContinuous, 0.5, 500, S::kLogUniform, G::kG3),
        num("inh_v_th", K::kContinuous, -40, 0, S::kUniform, G::kG1),
        num("inh_v_rest", K::kContinuous, -60, -45, S::kUniform, G::kG1),
        num("inh_tau", K::kContinuous, 5, 5000, S::kLogUniform, G::kG1),
        num("inh_t_ref", K::kDiscrete, 0, 20, S::kUniform, G::kG1),
        num("inh_strength", K::kContinuous, 0.5, 500, S::kLogUniform, G::kG3),
    });
}

}  // namespace spikehpo
