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

#include "spikehpo/snn/network.hpp"

#include <algorithm>
#include <set>

namespace spikehpo::snn {

void NetworkSpec::validate() const {
    if (n_inputs == 0) throw ValidationError("network: no inputs");
    if (map_size == 0) throw ValidationError("network: map_size must be at least 1");
    if (epochs < 1) throw ValidationError("network: epochs must be at least 1");
    if (frames == 0) throw ValidationError("network: frames must be at least 1");
    if (!(max_rate >= 0.0 && max_rate <= 1.0)) {
        throw ValidationError("network: max_rate must lie in [0,1]");
    }
    if (!(exc_strength >= 0.0)) throw ValidationError("network: exc_strength must be >= 0");
    if (!(inh_strength >= 0.0)) throw ValidationError("network: inh_strength must be >= 0");
    if (!(weight_norm > 0.0)) throw ValidationError("network: weight_norm must be positive");
    if (!(stdp.w_max > 0.0)) throw ValidationError("network: w_max must be positive");
    if (!(stdp.lambda_minus >= 0.0 && stdp.lambda_minus <= 1.0)) {
        throw ValidationError("network: lambda_minus must lie in [0,1]");
    }
    if (!(stdp.lambda_plus >= 0.0 && stdp.lambda_plus <= 1.0)) {
        throw ValidationError("network: lambda_plus must lie in [0,1]");
    }
    if (!(stdp.tau_trace_pre > 0.0 && stdp.tau_trace_post > 0.0)) {
        throw ValidationError("network: trace time constants must be positive");
    }
    if (decoder.kind == DecoderKind::kNGram && decoder.n == 0) {
        throw ValidationError("network: n-gram decoder needs n >= 1");
    }
    exc.validate(kExcitatoryLayer);
    inh.validate(kInhibitoryLayer);
}

Network::Network(const NetworkSpec& spec, Rng& rng)
    : spec_((spec.validate(), spec)),
      weights_(spec.n_inputs, spec.map_size),
      exc_(spec.map_size, spec.exc),
      inh_(spec.map_size, spec.inh),
      pre_trace_(spec.n_inputs, 0.0),
      post_trace_(spec.map_size, 0.0),
      current_(spec.map_size, 0.0),
      inh_current_(spec.map_size, 0.0),
      exc_spikes_(spec.map_size, 0),
      inh_spikes_(spec.map_size, 0) {
    for (double& w : weights_.w) {
        w = 0.3 * spec.stdp.w_max * uniform01(rng);
    }
    normalize();
}

void Network::normalize() {
    normalize_weights(weights_, spec_.weight_norm, spec_.stdp.w_max);
}

SampleResponse Network::present(const SpikeTrain& input, bool learn,
                                const RasterObserver& observer) {
    if (input.frames == 0) {
        throw ValidationError("cannot present an empty spike train");
    }
    if (input.units != spec_.n_inputs) {
        throw ValidationError("spike train width differs from the network input count");
    }
    const std::size_t n = spec_.map_size;
    const auto& k = simd::kernels();
    exc_.reset_state();
    inh_.reset_state();
    std::fill(pre_trace_.begin(), pre_trace_.end(), 0.0);
    std::fill(post_trace_.begin(), post_trace_.end(), 0.0);
    std::fill(inh_spikes_.begin(), inh_spikes_.end(), 0);

    SampleResponse r;
    r.counts.assign(n, 0);
    std::size_t inh_active = 0;  // inhibitory spikes in the previous frame
    for (std::size_t t = 0; t < input.frames; ++t) {
        const std::uint8_t* pre = input.frame(t);
        std::fill(current_.begin(), current_.end(), 0.0);
        for (std::size_t i = 0; i < spec_.n_inputs; ++i) {
            if (pre[i]) k.add_row(current_.data(), weights_.row(i), n);
        }
        if (inh_active > 0) {
            for (std::size_t j = 0; j < n; ++j) {
                current_[j] -= spec_.inh_strength *
                               static_cast<double>(inh_active - inh_spikes_[j]);
            }
        }
        const std::size_t fired = exc_.step(current_.data(), exc_spikes_.data(), learn);
        for (std::size_t j = 0; j < n; ++j) {
            inh_current_[j] = exc_spikes_[j] ? spec_.exc_strength : 0.0;
        }
        inh_active = inh_.step(inh_current_.data(), inh_spikes_.data(), false);

        if (learn) {
            stdp_update(weights_, pre_trace_, post_trace_,
                        std::span<const std::uint8_t>(pre, spec_.n_inputs), exc_spikes_,
                        spec_.stdp);
        }
        if (fired > 0) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!exc_spikes_[j]) continue;
                if (r.counts[j] == 0) r.order.push_back(static_cast<std::uint32_t>(j));
                ++r.counts[j];
            }
        }
        r.excitatory_spikes += static_cast<std::int64_t>(fired);
        r.inhibitory_spikes += static_cast<std::int64_t>(inh_active);
        if (observer) observer(exc_spikes_.data(), inh_spikes_.data());
    }
    return r;
}

StopOutcome train(Network& net, const Dataset& data, const std::vector<StopCriterion>& criteria,
                  Rng& rng) {
    if (data.size() == 0) {
        throw ValidationError("training set is empty");
    }
    for (const auto& c : criteria) {
        if (c.layer != kExcitatoryLayer && c.layer != kInhibitoryLayer) {
            throw ValidationError("stop criterion refers to unknown layer '" + c.layer + "'");
        }
    }
    EarlyStopMonitor monitor(criteria, static_cast<std::int64_t>(data.size()));
    const auto& spec = net.spec();
    for (std::int64_t epoch = 0; epoch < spec.epochs; ++epoch) {
        monitor.begin_epoch();
        for (std::size_t s = 0; s < data.size(); ++s) {
            const SpikeTrain input = poisson_encode(data.images[s], spec.frames, spec.max_rate, rng);
            const SampleResponse r = net.present(input, true);
            for (const auto& c : criteria) {
                monitor.observe(c.layer, c.layer == kExcitatoryLayer ? r.excitatory_spikes
                                                                     : r.inhibitory_spikes);
            }
            monitor.finish_sample();
            net.normalize();
            if (monitor.should_stop()) {
                return monitor.outcome(true);
            }
        }
    }
    return monitor.outcome(false);
}

std::vector<SampleResponse> record_responses(Network& net, const Dataset& data, Rng& rng,
                                             std::size_t limit) {
    const std::size_t n = limit > 0 ? std::min(limit, data.size()) : data.size();
    std::vector<SampleResponse> out;
    out.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        const SpikeTrain input =
            poisson_encode(data.images[s], net.spec().frames, net.spec().max_rate, rng);
        out.push_back(net.present(input, false));
    }
    return out;
}

}  // namespace spikehpo::snn
