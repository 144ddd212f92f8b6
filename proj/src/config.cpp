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

#include "spikehpo/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace spikehpo {

using Json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out = "invalid configuration:";
    for (const auto& l : lines) {
        out += "\n  " + l;
    }
    return out;
}

template <typename T>
constexpr const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_signed_v<T>) return "an integer";
    else return "a non-negative integer";
}

template <typename T>
bool convert(const Json& j, T& out) {
    if constexpr (std::is_same_v<T, bool>) {
        if (!j.is_boolean()) return false;
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!j.is_string()) return false;
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!j.is_number()) return false;
    } else if constexpr (std::is_signed_v<T>) {
        if (!j.is_number_integer()) return false;
    } else {
        if (!j.is_number_unsigned()) return false;
    }
    out = j.get<T>();
    return true;
}

// Tracks which keys of one JSON object were consumed.
class Reader {
public:
    Reader(const Json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {
        if (!obj_.is_object()) {
            error("", "expected an object");
            valid_ = false;
        }
    }

    ~Reader() {
        if (!valid_) return;
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.count(key)) {
                error(key, "unknown key");
            }
        }
    }

    std::string at(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const Json* child(const std::string& key) {
        used_.insert(key);
        if (!valid_) return nullptr;
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    template <typename T>
    void optional(const std::string& key, T& out) {
        if (const Json* j = child(key)) {
            if (!convert(*j, out)) error(key, std::string("expected ") + type_name<T>());
        }
    }

    template <typename T>
    bool required(const std::string& key, T& out) {
        const Json* j = child(key);
        if (j == nullptr) {
            if (valid_) error(key, "missing");
            return false;
        }
        if (!convert(*j, out)) {
            error(key, std::string("expected ") + type_name<T>());
            return false;
        }
        return true;
    }

    void error(const std::string& key, const std::string& message) {
        errors_.push_back((key.empty() ? (path_.empty() ? std::string("<root>") : path_) : at(key)) +
                          ": " + message);
    }

private:
    const Json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
    bool valid_ = true;
};

template <typename Fn>
void capture(std::vector<std::string>& errors, const std::string& path, Fn&& fn) {
    try {
        fn();
    } catch (const ValidationError& e) {
        errors.push_back(path + ": " + e.what());
    }
}

ParamSpec read_param(const Json& j, const std::string& path, std::vector<std::string>& errors) {
    ParamSpec p;
    Reader r(j, path, errors);
    r.required("name", p.name);
    std::string kind, sampler, group;
    const bool have_kind = r.required("kind", kind);
    if (have_kind) capture(errors, r.at("kind"), [&] { p.kind = parse_kind(kind); });
    if (r.required("sampler", sampler)) {
        capture(errors, r.at("sampler"), [&] { p.sampler = parse_sampler(sampler); });
    }
    if (r.required("group", group)) {
        capture(errors, r.at("group"), [&] { p.group = parse_group(group); });
    }
    if (have_kind && p.kind == ParamKind::kCategorical) {
        const Json* c = r.child("choices");
        if (c == nullptr) {
            r.error("choices", "missing");
        } else if (!c->is_array()) {
            r.error("choices", "expected an array of strings");
        } else {
            for (const auto& v : *c) {
                if (!v.is_string()) {
                    r.error("choices", "expected an array of strings");
                    break;
                }
                p.choices.push_back(v.get<std::string>());
            }
        }
        if (r.child("lower") || r.child("upper")) {
            r.error("lower", "categorical parameters take choices, not bounds");
        }
    } else {
        r.required("lower", p.lower);
        r.required("upper", p.upper);
        if (r.child("choices")) r.error("choices", "only categorical parameters take choices");
    }
    return p;
}

void read_scbo(const Json& j, ScboConfig& s, std::vector<std::string>& errors) {
    Reader r(j, "scbo", errors);
    r.optional("n_init", s.n_init);
    r.optional("n_cand", s.n_cand);
    r.optional("q", s.q);
    r.optional("length_init", s.length_init);
    r.optional("length_min", s.length_min);
    r.optional("length_max", s.length_max);
    r.optional("succ_tol", s.succ_tol);
    r.optional("fail_tol", s.fail_tol);
    r.optional("feasibility_margin", s.feasibility_margin);
    r.optional("perturb_probability", s.perturb_probability);
    r.optional("stopped_in_objective", s.stopped_in_objective);
    r.optional("fit_restarts", s.fit_restarts);
    r.optional("fit_iterations", s.fit_iterations);
}

void read_dataset(const Json& j, DatasetConfig& d, std::vector<std::string>& errors) {
    Reader r(j, "simulator.dataset", errors);
    r.optional("kind", d.kind);
    if (d.kind == "synthetic") {
        auto& s = d.synthetic;
        r.optional("classes", s.classes);
        r.optional("width", s.width);
        r.optional("height", s.height);
        r.optional("train", s.train);
        r.optional("valid", s.valid);
        r.optional("test", s.test);
        r.optional("seed", s.seed);
    } else if (d.kind == "idx") {
        r.required("train_images", d.train_images);
        r.required("train_labels", d.train_labels);
        r.required("valid_images", d.valid_images);
        r.required("valid_labels", d.valid_labels);
        r.optional("limit", d.limit);
    } else {
        r.error("kind", "expected \"synthetic\" or \"idx\"");
    }
}

void read_simulator(const Json& j, SimulatorConfig& s, std::vector<std::string>& errors) {
    Reader r(j, "simulator", errors);
    r.optional("frames", s.frames);
    r.optional("max_rate", s.max_rate);
    r.optional("w_max", s.w_max);
    r.optional("tau_trace", s.tau_trace);
    r.optional("v_reset_exc", s.v_reset_exc);
    r.optional("v_reset_inh", s.v_reset_inh);
    r.optional("weight_norm_reference_inputs", s.weight_norm_reference_inputs);
    r.optional("label_samples", s.label_samples);
    if (const Json* f = r.child("fixed")) {
        if (!f->is_object()) {
            r.error("fixed", "expected an object");
        } else {
            for (const auto& [name, value] : f->items()) {
                if (value.is_string()) {
                    s.fixed.values[name] = value.get<std::string>();
                } else if (value.is_number_integer()) {
                    s.fixed.values[name] = value.get<std::int64_t>();
                } else if (value.is_number()) {
                    s.fixed.values[name] = value.get<double>();
                } else {
                    r.error("fixed." + name, "expected a number or a string");
                }
            }
        }
    }
    if (const Json* d = r.child("dataset")) {
        read_dataset(*d, s.dataset, errors);
    }
    if (s.frames == 0) r.error("frames", "must be at least 1");
    if (!(s.max_rate >= 0.0 && s.max_rate <= 1.0)) r.error("max_rate", "must lie in [0,1]");
    if (!(s.w_max > 0.0)) r.error("w_max", "must be positive");
    if (!(s.tau_trace > 0.0)) r.error("tau_trace", "must be positive");
    if (!(s.weight_norm_reference_inputs > 0.0)) {
        r.error("weight_norm_reference_inputs", "must be positive");
    }
}

Json value_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : ValidationError(join(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigError({std::string("<root>: not valid JSON: ") + e.what()});
    }
    std::vector<std::string> errors;
    ExperimentConfig c;
    {
        Reader r(root, "", errors);
        r.required("name", c.name);
        r.optional("seed", c.seed);
        r.optional("output_dir", c.output_dir);
        if (const Json* b = r.child("budget")) {
            Reader br(*b, "budget", errors);
            br.optional("max_trials", c.budget.max_trials);
            br.optional("max_wall_seconds", c.budget.max_wall_seconds);
            br.optional("workers", c.budget.workers);
        }
        std::vector<ParamSpec> params;
        const Json* space = r.child("search_space");
        if (space == nullptr) {
            r.error("search_space", "missing");
        } else if (!space->is_array() || space->empty()) {
            r.error("search_space", "expected a non-empty array");
        } else {
            for (std::size_t i = 0; i < space->size(); ++i) {
                const std::string path = "search_space[" + std::to_string(i) + "]";
                ParamSpec p = read_param((*space)[i], path, errors);
                const std::string label = p.name.empty() ? path : path + " (" + p.name + ")";
                capture(errors, label, [&] { p.validate(); });
                params.push_back(std::move(p));
            }
        }
        if (const Json* s = r.child("scbo")) read_scbo(*s, c.scbo, errors);
        if (const Json* e = r.child("early_stopping")) {
            if (!e->is_array()) {
                r.error("early_stopping", "expected an array");
            } else {
                for (std::size_t i = 0; i < e->size(); ++i) {
                    const std::string path = "early_stopping[" + std::to_string(i) + "]";
                    StopCriterion sc;
                    {
                        Reader er((*e)[i], path, errors);
                        er.required("layer", sc.layer);
                        er.required("alpha", sc.alpha);
                        er.required("beta", sc.beta);
                    }
                    capture(errors, path, [&] { sc.validate(); });
                    c.early_stopping.push_back(std::move(sc));
                }
            }
        }
        if (const Json* s = r.child("simulator")) read_simulator(*s, c.simulator, errors);

        if (errors.empty()) {
            capture(errors, "search_space", [&] { c.space = SearchSpace(std::move(params)); });
        }
    }
    if (c.output_dir.empty()) c.output_dir = "runs/" + c.name;
    capture(errors, "budget", [&] { c.budget.validate(); });
    if (errors.empty()) {
        capture(errors, "scbo", [&] { (void)c.scbo.resolved(c.space.dimension()); });
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    validate_experiment(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({path + ": cannot read configuration file"});
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_experiment(const ExperimentConfig& c) {
    std::vector<std::string> errors;
    for (const auto& name : snn::simulator_parameters()) {
        const bool searched = c.space.index_of(name) < c.space.dimension();
        const bool fixed = c.simulator.fixed.contains(name);
        if (!searched && !fixed) {
            errors.push_back("simulator.fixed." + name +
                             ": parameter is neither in search_space nor fixed");
        } else if (searched && fixed) {
            errors.push_back("simulator.fixed." + name + ": parameter is also in search_space");
        }
    }
    for (const auto& [name, value] : c.simulator.fixed.values) {
        const auto& known = snn::simulator_parameters();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            errors.push_back("simulator.fixed." + name + ": unknown simulator parameter");
        }
    }
    for (std::size_t i = 0; i < c.early_stopping.size(); ++i) {
        const auto& layer = c.early_stopping[i].layer;
        if (layer != snn::kExcitatoryLayer && layer != snn::kInhibitoryLayer) {
            errors.push_back("early_stopping[" + std::to_string(i) +
                             "].layer: expected \"excitatory\" or \"inhibitory\"");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (c.early_stopping[k].layer == layer) {
                errors.push_back("early_stopping[" + std::to_string(i) +
                                 "].layer: duplicate criterion for '" + layer + "'");
            }
        }
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string dump_config(const ExperimentConfig& c) {
    Json root;
    root["name"] = c.name;
    root["seed"] = c.seed;
    root["output_dir"] = c.output_dir;
    root["budget"] = {{"max_trials", c.budget.max_trials},
                      {"max_wall_seconds", c.budget.max_wall_seconds},
                      {"workers", c.budget.workers}};
    Json space = Json::array();
    for (const auto& p : c.space.params()) {
        Json e;
        e["name"] = p.name;
        e["kind"] = std::string(to_string(p.kind));
        if (p.kind == ParamKind::kCategorical) {
            e["choices"] = p.choices;
        } else {
            e["lower"] = p.lower;
            e["upper"] = p.upper;
        }
        e["sampler"] = std::string(to_string(p.sampler));
        e["group"] = std::string(to_string(p.group));
        space.push_back(std::move(e));
    }
    root["search_space"] = std::move(space);
    const auto& s = c.scbo;
    root["scbo"] = {{"n_init", s.n_init},
                    {"n_cand", s.n_cand},
                    {"q", s.q},
                    {"length_init", s.length_init},
                    {"length_min", s.length_min},
                    {"length_max", s.length_max},
                    {"succ_tol", s.succ_tol},
                    {"fail_tol", s.fail_tol},
                    {"feasibility_margin", s.feasibility_margin},
                    {"perturb_probability", s.perturb_probability},
                    {"stopped_in_objective", s.stopped_in_objective},
                    {"fit_restarts", s.fit_restarts},
                    {"fit_iterations", s.fit_iterations}};
    Json stops = Json::array();
    for (const auto& sc : c.early_stopping) {
        stops.push_back({{"layer", sc.layer}, {"alpha", sc.alpha}, {"beta", sc.beta}});
    }
    root["early_stopping"] = std::move(stops);
    const auto& m = c.simulator;
    Json sim;
    sim["frames"] = m.frames;
    sim["max_rate"] = m.max_rate;
    sim["w_max"] = m.w_max;
    sim["tau_trace"] = m.tau_trace;
    sim["v_reset_exc"] = m.v_reset_exc;
    sim["v_reset_inh"] = m.v_reset_inh;
    sim["weight_norm_reference_inputs"] = m.weight_norm_reference_inputs;
    sim["label_samples"] = m.label_samples;
    Json fixed = Json::object();
    for (const auto& [name, value] : m.fixed.values) fixed[name] = value_json(value);
    sim["fixed"] = std::move(fixed);
    const auto& d = m.dataset;
    if (d.kind == "idx") {
        sim["dataset"] = {{"kind", d.kind},
                          {"train_images", d.train_images},
                          {"train_labels", d.train_labels},
                          {"valid_images", d.valid_images},
                          {"valid_labels", d.valid_labels},
                          {"limit", d.limit}};
    } else {
        const auto& y = d.synthetic;
        sim["dataset"] = {{"kind", d.kind},       {"classes", y.classes}, {"width", y.width},
                          {"height", y.height},   {"train", y.train},     {"valid", y.valid},
                          {"test", y.test},       {"seed", y.seed}};
    }
    root["simulator"] = std::move(sim);
    return root.dump(2) + "\n";
}

snn::DatasetSplits load_dataset(const DatasetConfig& d) {
    if (d.kind == "idx") {
        snn::DatasetSplits s;
        s.train = snn::read_idx(d.train_images, d.train_labels, d.limit);
        s.valid = snn::read_idx(d.valid_images, d.valid_labels, d.limit);
        s.valid.classes = s.train.classes = std::max(s.train.classes, s.valid.classes);
        s.train.validate();
        s.valid.validate();
        return s;
    }
    return snn::make_synthetic(d.synthetic);
}

snn::SimulatorProfile make_profile(const ExperimentConfig& c,
                                   std::shared_ptr<const snn::DatasetSplits> data) {
    snn::SimulatorProfile p;
    p.data = std::move(data);
    p.frames = c.simulator.frames;
    p.max_rate = c.simulator.max_rate;
    p.w_max = c.simulator.w_max;
    p.tau_trace = c.simulator.tau_trace;
    p.v_reset_exc = c.simulator.v_reset_exc;
    p.v_reset_inh = c.simulator.v_reset_inh;
    p.weight_norm_reference_inputs = c.simulator.weight_norm_reference_inputs;
    p.label_samples = c.simulator.label_samples;
    p.fixed = c.simulator.fixed;
    return p;
}

}  // namespace spikehpo
