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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "spikehpo/snn/dataset.hpp"
#include "spikehpo/snn/decoder.hpp"
#include "spikehpo/snn/encoder.hpp"
#include "spikehpo/snn/evaluator.hpp"
#include "spikehpo/snn/network.hpp"

using namespace spikehpo;
using namespace spikehpo::snn;

namespace {

const DatasetSplits& synthetic() {
    static const DatasetSplits data = make_synthetic(SyntheticSpec{});
    return data;
}

// Reference configuration used for the activity and invariant checks.
NetworkSpec reference_spec() {
    NetworkSpec s;
    s.n_inputs = 64;
    s.map_size = 30;
    s.weight_norm = 78.4 * 64.0 / 784.0;
    s.exc.theta_plus = 0.05;
    s.exc.tau_theta = 1e6;
    s.inh.v_th = -40.0;
    s.inh.v_rest = -60.0;
    s.inh.v_reset = -45.0;
    s.inh.tau = 10.0;
    s.inh.t_ref = 2;
    s.exc_strength = 22.5;
    s.inh_strength = 17.5;
    s.stdp.lambda_minus = 1e-4;
    s.stdp.lambda_plus = 1e-2;
    return s;
}

NetworkSpec silent_spec() {
    NetworkSpec s = reference_spec();
    s.exc.v_th = 1e9;
    s.inh.v_th = 1e9;
    return s;
}

Dataset first(const Dataset& d, std::size_t n) {
    Dataset out = d;
    out.images.resize(n);
    out.labels.resize(n);
    return out;
}

SampleResponse response(std::vector<std::uint32_t> counts) {
    SampleResponse r;
    r.counts = std::move(counts);
    for (std::uint32_t j = 0; j < r.counts.size(); ++j) {
        if (r.counts[j] > 0) r.order.push_back(j);
        r.excitatory_spikes += r.counts[j];
    }
    return r;
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

TEST_SUITE("snn") {

TEST_CASE("poisson encoder") {
    Rng rng(1);
    const std::vector<double> zero(16, 0.0);
    CHECK(poisson_encode(zero, 100, 0.25, rng).total() == 0);

    const std::vector<double> one{1.0};
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) sum += static_cast<double>(poisson_encode(one, 100, 0.25, rng).total());
    CHECK(std::abs(sum / 1000.0 - 25.0) <= 1.5);

    // mean rate within 3 binomial sigma for a mid intensity
    const std::vector<double> half{0.4};
    const double p = 0.4 * 0.25;
    const double trials = 1000.0 * 100.0;
    double hits = 0.0;
    for (int i = 0; i < 1000; ++i) hits += static_cast<double>(poisson_encode(half, 100, 0.25, rng).total());
    CHECK(std::abs(hits / trials - p) <= 3.0 * std::sqrt(p * (1 - p) / trials));

    Rng a(5), b(5);
    CHECK(poisson_encode(synthetic().train.images[0], 50, 0.25, a).bits ==
          poisson_encode(synthetic().train.images[0], 50, 0.25, b).bits);
    CHECK(poisson_encode(one, 0, 0.25, rng).total() == 0);
    CHECK_THROWS_AS(poisson_encode(std::vector<double>{1.5}, 10, 0.25, rng), ValidationError);
}

TEST_CASE("empty train is rejected downstream") {
    Rng rng(1);
    Network net(reference_spec(), rng);
    const auto empty = poisson_encode(synthetic().train.images[0], 0, 0.25, rng);
    CHECK_THROWS_AS(net.present(empty, false), ValidationError);
}

TEST_CASE("lif step examples") {
    NeuronParams p;
    p.v_th = -55.0;
    p.v_rest = -65.0;
    p.v_reset = -70.0;
    p.t_ref = 4;
    NeuronState s{p.v_rest, 0, 0.0};
    CHECK_FALSE(lif_step(s, 0.0, p));
    CHECK(s.v == p.v_rest);
    CHECK(lif_step(s, 20.0, p));
    CHECK(s.v == p.v_reset);
    CHECK(s.refractory == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK_FALSE(lif_step(s, 100.0, p));
        CHECK(s.v == p.v_reset);
    }
    CHECK(lif_step(s, 100.0, p));

    p.theta_plus = 0.05;
    p.tau_theta = 1e6;
    NeuronState a{p.v_rest, 0, 0.0};
    CHECK(lif_step(a, 20.0, p));
    for (int i = 0; i < 1000; ++i) lif_step(a, 0.0, p);
    CHECK(a.theta == doctest::Approx(0.05).epsilon(2e-3));
}

TEST_CASE("stdp examples") {
    StdpParams p;
    p.lambda_plus = 0.01;
    p.lambda_minus = 0.01;
    Weights w(1, 1);
    std::vector<double> pre(1, 0.0), post(1, 0.0);
    const std::vector<std::uint8_t> on{1}, off{0};
    stdp_update(w, pre, post, on, off, p);
    stdp_update(w, pre, post, off, on, p);
    CHECK(w.at(0, 0) == doctest::Approx(0.00951229424500714).epsilon(1e-12));

    Weights still(2, 2);
    still.w = {0.1, 0.2, 0.3, 0.4};
    const auto before = still.w;
    std::vector<double> pre2(2, 0.0), post2(2, 0.0);
    const std::vector<std::uint8_t> none{0, 0};
    for (int i = 0; i < 10; ++i) stdp_update(still, pre2, post2, none, none, p);
    CHECK(still.w == before);

    // post activity followed by input spikes only depresses
    Weights d(1, 1);
    d.w = {0.8};
    std::vector<double> pre3(1, 0.0), post3(1, 0.0);
    double prev = d.w[0];
    for (int i = 0; i < 200; ++i) {
        stdp_update(d, pre3, post3, off, on, p);
        pre3[0] = 0.0;
        stdp_update(d, pre3, post3, on, off, p);
        pre3[0] = 0.0;
        CHECK(d.w[0] <= prev);
        CHECK(d.w[0] >= 0.0);
        prev = d.w[0];
    }
    CHECK(d.w[0] < 0.8);
}

TEST_CASE("normalize examples") {
    Weights w(2, 1);
    w.w = {0.2, 0.2};
    normalize_weights(w, 1.0, 1.0);
    CHECK(w.w[0] == doctest::Approx(0.5));
    CHECK(w.w[1] == doctest::Approx(0.5));
    const auto same = w.w;
    normalize_weights(w, 1.0, 1.0);
    CHECK(std::abs(w.w[0] - same[0]) < 1e-12);

    Weights z(3, 2);
    z.w = {0.0, 0.1, 0.0, 0.2, 0.0, 0.3};
    normalize_weights(z, 1.0, 1.0);
    CHECK(z.column_sum(0) == 0.0);
    CHECK(z.column_sum(1) == doctest::Approx(1.0).epsilon(1e-12));

    // capped at w_max with the excess redistributed
    Weights c(3, 1);
    c.w = {0.9, 0.05, 0.05};
    normalize_weights(c, 2.0, 1.0);
    CHECK(c.w[0] == 1.0);
    CHECK(c.column_sum(0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("silent network stops at the first violating sample") {
    Rng rng(3);
    auto spec = silent_spec();
    spec.epochs = 3;
    Network net(spec, rng);
    const std::vector<StopCriterion> criteria{{kExcitatoryLayer, 5, 0.1}, {kInhibitoryLayer, 1, 0.1}};
    const auto out = train(net, synthetic().train, criteria, rng);
    CHECK(out.stopped);
    CHECK(out.samples_processed == max_silent_samples(0.1, 300) + 1);
    CHECK(out.samples_processed == 31);
    CHECK(out.violations[0] == doctest::Approx(31.0 / 300.0 - 0.1).epsilon(1e-12));

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Rng r(seed);
        Network n(silent_spec(), r);
        for (int i = 0; i < 5; ++i) {
            const auto resp = n.present(poisson_encode(synthetic().train.images[i], 100, 0.25, r), true);
            CHECK(resp.excitatory_spikes == 0);
            CHECK(resp.inhibitory_spikes == 0);
        }
    }
}

TEST_CASE("beta of one never stops training") {
    Rng rng(3);
    auto spec = silent_spec();
    spec.epochs = 2;
    Network net(spec, rng);
    const auto data = first(synthetic().train, 40);
    const auto out = train(net, data, {{kExcitatoryLayer, 5, 1.0}, {kInhibitoryLayer, 1, 1.0}}, rng);
    CHECK_FALSE(out.stopped);
    CHECK(out.samples_processed == 80);
}

TEST_CASE("reference network is active and respects invariants") {
    Rng rng(7);
    const auto spec = reference_spec();
    Network net(spec, rng);
    const auto& data = synthetic().train;
    std::size_t active = 0;
    std::vector<std::int64_t> last_exc(spec.map_size, -1000), last_inh(spec.map_size, -1000);
    bool refractory_ok = true;
    std::int64_t frame = 0;
    const RasterObserver scan = [&](const std::uint8_t* e, const std::uint8_t* in) {
        for (std::size_t j = 0; j < spec.map_size; ++j) {
            if (e[j]) {
                if (frame - last_exc[j] <= spec.exc.t_ref) refractory_ok = false;
                last_exc[j] = frame;
            }
            if (in[j]) {
                if (frame - last_inh[j] <= spec.inh.t_ref) refractory_ok = false;
                last_inh[j] = frame;
            }
        }
        ++frame;
    };
    bool theta_ok = true;
    bool norm_ok = true;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto theta_before = net.theta();
        frame += 1000;  // separate samples
        const auto r = net.present(poisson_encode(data.images[s], spec.frames, spec.max_rate, rng), true, scan);
        net.normalize();
        if (r.excitatory_spikes > 0) ++active;
        for (std::size_t j = 0; j < spec.map_size; ++j) {
            if (net.theta()[j] < 0.0) theta_ok = false;
            if (r.counts[j] == 0 && net.theta()[j] > theta_before[j]) theta_ok = false;
            const double sum = net.weights().column_sum(j);
            if (std::abs(sum - spec.weight_norm) > 1e-6 * spec.weight_norm) norm_ok = false;
        }
    }
    CHECK(static_cast<double>(active) >= 0.95 * static_cast<double>(data.size()));
    CHECK(refractory_ok);
    CHECK(theta_ok);
    CHECK(norm_ok);
    for (double w : net.weights().w) {
        CHECK(w >= 0.0);
        CHECK(w <= spec.stdp.w_max);
    }

    // frozen presentation leaves thresholds and weights alone
    const auto theta = net.theta();
    const auto weights = net.weights().w;
    net.present(poisson_encode(data.images[0], spec.frames, spec.max_rate, rng), false);
    CHECK(net.theta() == theta);
    CHECK(net.weights().w == weights);
}

TEST_CASE("decoders") {
    CHECK(parse_decoder("average").kind == DecoderKind::kAverage);
    CHECK(parse_decoder("max").kind == DecoderKind::kMax);
    CHECK(parse_decoder("3-gram").n == 3);
    CHECK(parse_decoder("2-gram").name() == "2-gram");
    CHECK_THROWS_AS(parse_decoder("median"), ValidationError);

    // neuron 0 fires only on class 2; neuron 1 equally on classes 0 and 1
    const std::vector<SampleResponse> rs{response({0, 3, 0}), response({0, 3, 0}), response({4, 0, 0})};
    const std::vector<int> labels{0, 1, 2};
    const auto a = assign_labels(rs, labels, 3);
    CHECK(a.labels[0] == 2);
    CHECK(a.labels[1] == 0);
    CHECK(a.dead[2]);
    CHECK_FALSE(a.dead[0]);

    const DecoderSpec max{DecoderKind::kMax, 0}, avg{DecoderKind::kAverage, 0};
    LabelAssignment one;
    one.classes = 3;
    one.labels = {0, 1, 2};
    one.dead = {false, false, false};
    CHECK(predict(response({0, 5, 0}), one, max) == 1);
    for (const auto& r : {response({1, 5, 2}), response({7, 1, 2}), response({0, 0, 9})}) {
        CHECK(predict(r, one, max) == predict(r, one, avg));
    }
    CHECK(predict(response({0, 0, 0}), one, max) == 0);
    CHECK_THROWS_AS(predict(response({1, 0, 0}), one, DecoderSpec{DecoderKind::kNGram, 2}),
                    ValidationError);

    // a silent network scores the chance rate of predicting class 0
    std::vector<SampleResponse> silent(300, response({0, 0, 0}));
    std::vector<int> uniform;
    for (int i = 0; i < 300; ++i) uniform.push_back(i % 3);
    const auto dead = assign_labels(silent, uniform, 3);
    CHECK(dead.dead == std::vector<bool>{true, true, true});
    CHECK(accuracy(silent, uniform, dead, max) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("n-gram decoder follows firing order") {
    std::vector<SampleResponse> rs;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        auto a = response({2, 2, 0});
        a.order = {0, 1};
        rs.push_back(a);
        labels.push_back(0);
        auto b = response({2, 2, 0});
        b.order = {1, 0};
        rs.push_back(b);
        labels.push_back(1);
    }
    const auto assignment = assign_labels(rs, labels, 2, 2);
    REQUIRE(assignment.ngram.has_value());
    const DecoderSpec ngram{DecoderKind::kNGram, 2};
    CHECK(accuracy(rs, labels, assignment, ngram) == 1.0);
}

TEST_CASE("synthetic dataset") {
    const auto& d = synthetic();
    CHECK(d.train.size() == 300);
    CHECK(d.valid.size() == 100);
    CHECK(d.test.size() == 100);
    CHECK(d.train.pixels() == 64);
    CHECK_NOTHROW(d.train.validate());
    for (const auto& img : d.train.images) {
        for (double v : img) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    const auto again = make_synthetic(SyntheticSpec{});
    CHECK(again.train.images == d.train.images);
    CHECK(again.valid.labels == d.valid.labels);
}

TEST_CASE("idx reader") {
    const auto dir = std::filesystem::temp_directory_path() / "spikehpo_idx_test";
    std::filesystem::create_directories(dir);
    const auto images = (dir / "img.idx").string();
    const auto labels = (dir / "lab.idx").string();
    {
        std::ofstream out(images, std::ios::binary);
        write_be32(out, 2051);
        write_be32(out, 3);
        write_be32(out, 2);
        write_be32(out, 2);
        const unsigned char px[12] = {0, 255, 51, 102, 0, 0, 0, 0, 255, 255, 255, 255};
        out.write(reinterpret_cast<const char*>(px), 12);
        std::ofstream lab(labels, std::ios::binary);
        write_be32(lab, 2049);
        write_be32(lab, 3);
        const unsigned char ls[3] = {1, 0, 1};
        lab.write(reinterpret_cast<const char*>(ls), 3);
    }
    const auto d = read_idx(images, labels);
    CHECK(d.size() == 3);
    CHECK(d.width == 2);
    CHECK(d.images[0][1] == 1.0);
    CHECK(d.images[0][2] == doctest::Approx(0.2));
    CHECK(d.labels == std::vector<int>{1, 0, 1});
    CHECK(read_idx(images, labels, 2).size() == 2);
    CHECK_THROWS_AS(read_idx(labels, images), ValidationError);
    CHECK_THROWS_AS(read_idx((dir / "missing").string(), labels), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("evaluator names a missing parameter") {
    SimulatorProfile profile;
    profile.data = std::make_shared<DatasetSplits>(synthetic());
    Rng rng(3);
    Configuration c = sample_prior(default_stdp_space(), 1, rng).front();
    c.values.erase("lambda_plus");
    try {
        network_spec_from(c, profile);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'lambda_plus'") != std::string::npos);
    }
    CHECK(simulator_parameters().size() == 18);
}

TEST_CASE("evaluation is seeded") {
    SimulatorProfile profile;
    auto small = synthetic();
    small.train = first(small.train, 30);
    small.valid = first(small.valid, 20);
    profile.data = std::make_shared<DatasetSplits>(small);
    profile.frames = 40;
    Rng rng(4);
    const auto cfg = sample_prior(default_stdp_space(), 1, rng).front();
    const std::vector<StopCriterion> criteria{{kExcitatoryLayer, 5, 0.1}, {kInhibitoryLayer, 1, 0.1}};
    const auto a = evaluate_configuration(cfg, profile, criteria, 11);
    const auto b = evaluate_configuration(cfg, profile, criteria, 11);
    CHECK(a.objective == b.objective);
    CHECK(a.violations == b.violations);
    CHECK(a.samples_processed == b.samples_processed);
    CHECK(a.objective >= 0.0);
    CHECK(a.objective <= 1.0);
    CHECK(a.stopped == (a.violations[0] > 0.0 || a.violations[1] > 0.0));
}

}  // TEST_SUITE
