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

#include "spikehpo/snn/evaluator.hpp"

#include <chrono>

namespace spikehpo::snn {

namespace {

class Lookup {
public:
    Lookup(const Configuration& config, const Configuration& fixed)
        : config_(config), fixed_(fixed) {}

    const ParamValue& value(const std::string& name) const {
        if (auto it = config_.values.find(name); it != config_.values.end()) return it->second;
        if (auto it = fixed_.values.find(name); it != fixed_.values.end()) return it->second;
        throw ValidationError("simulator parameter '" + name +
                              "' is neither searched nor fixed in simulator.fixed");
    }

    double real(const std::string& name) const {
        const auto& v = value(name);
        if (const auto* d = std::get_if<double>(&v)) return *d;
        if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
        throw ValidationError("simulator parameter '" + name + "' must be numeric");
    }

    std::int64_t integer(const std::string& name) const {
        const auto& v = value(name);
        if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
        if (const auto* d = std::get_if<double>(&v)) {
            const auto r = static_cast<std::int64_t>(*d);
            if (static_cast<double>(r) == *d) return r;
        }
        throw ValidationError("simulator parameter '" + name + "' must be an integer");
    }

    std::string text(const std::string& name) const {
        const auto& v = value(name);
        if (const auto* s = std::get_if<std::string>(&v)) return *s;
        throw ValidationError("simulator parameter '" + name + "' must be a choice label");
    }

private:
    const Configuration& config_;
    const Configuration& fixed_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& simulator_parameters() {
    static const std::vector<std::string> names = {
        "lambda_minus", "lambda_plus",    "map_size",      "decoder",      "epochs",
        "weight_norm",  "exc_v_th",       "exc_v_rest",    "exc_tau",      "exc_t_ref",
        "exc_theta_plus", "exc_tau_theta", "exc_strength", "inh_v_th",     "inh_v_rest",
        "inh_tau",      "inh_t_ref",      "inh_strength",
    };
    return names;
}

NetworkSpec network_spec_from(const Configuration& config, const SimulatorProfile& profile) {
    if (!profile.data) {
        throw ValidationError("simulator profile has no dataset");
    }
    if (!(profile.weight_norm_reference_inputs > 0.0)) {
        throw ValidationError("simulator.weight_norm_reference_inputs must be positive");
    }
    const Lookup p(config, profile.fixed);
    NetworkSpec s;
    s.n_inputs = profile.data->train.pixels();
    const std::int64_t map_size = p.integer("map_size");
    if (map_size < 1) throw ValidationError("map_size must be at least 1");
    s.map_size = static_cast<std::size_t>(map_size);
    s.exc_strength = p.real("exc_strength");
    s.inh_strength = p.real("inh_strength");

    s.exc.v_th = p.real("exc_v_th");
    s.exc.v_rest = p.real("exc_v_rest");
    s.exc.v_reset = profile.v_reset_exc;
    s.exc.tau = p.real("exc_tau");
    s.exc.t_ref = p.integer("exc_t_ref");
    s.exc.theta_plus = p.real("exc_theta_plus");
    s.exc.tau_theta = p.real("exc_tau_theta");

    s.inh.v_th = p.real("inh_v_th");
    s.inh.v_rest = p.real("inh_v_rest");
    s.inh.v_reset = profile.v_reset_inh;
    s.inh.tau = p.real("inh_tau");
    s.inh.t_ref = p.integer("inh_t_ref");
    s.inh.theta_plus = 0.0;

    s.stdp.lambda_minus = p.real("lambda_minus");
    s.stdp.lambda_plus = p.real("lambda_plus");
    s.stdp.w_max = profile.w_max;
    s.stdp.tau_trace_pre = profile.tau_trace;
    s.stdp.tau_trace_post = profile.tau_trace;

    s.weight_norm = p.real("weight_norm") * static_cast<double>(s.n_inputs) /
                    profile.weight_norm_reference_inputs;
    s.epochs = p.integer("epochs");
    s.decoder = parse_decoder(p.text("decoder"));
    s.frames = profile.frames;
    s.max_rate = profile.max_rate;
    s.validate();
    return s;
}

TrialResult evaluate_configuration(const Configuration& config, const SimulatorProfile& profile,
                                   const std::vector<StopCriterion>& criteria,
                                   std::uint64_t seed) {
    const NetworkSpec spec = network_spec_from(config, profile);
    const DatasetSplits& data = *profile.data;
    if (data.valid.size() == 0) {
        throw ValidationError("validation split is empty");
    }
    Rng rng(seed);

    const auto t0 = std::chrono::steady_clock::now();
    Network net(spec, rng);
    const StopOutcome outcome = train(net, data.train, criteria, rng);
    const double train_seconds = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const auto labeled = record_responses(net, data.train, rng, profile.label_samples);
    const std::vector<int> labels(data.train.labels.begin(),
                                  data.train.labels.begin() +
                                      static_cast<std::ptrdiff_t>(labeled.size()));
    const std::size_t ngram = spec.decoder.kind == DecoderKind::kNGram ? spec.decoder.n : 0;
    const LabelAssignment assignment =
        assign_labels(labeled, labels, data.train.classes, ngram);
    const auto responses = record_responses(net, data.valid, rng);
    const double acc = accuracy(responses, data.valid.labels, assignment, spec.decoder);

    TrialResult r;
    r.objective = acc;
    r.violations = outcome.violations;
    r.stopped = outcome.stopped;
    r.samples_processed = outcome.samples_processed;
    r.train_seconds = train_seconds;
    r.eval_seconds = seconds_since(t1);
    return r;
}

}  // namespace spikehpo::snn
