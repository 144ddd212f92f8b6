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

#include "spikehpo/snn/decoder.hpp"

#include <charconv>
#include <limits>

#include "spikehpo/common.hpp"

namespace spikehpo::snn {

std::string DecoderSpec::name() const {
    switch (kind) {
        case DecoderKind::kAverage:
            return "average";
        case DecoderKind::kMax:
            return "max";
        case DecoderKind::kNGram:
            return std::to_string(n) + "-gram";
    }
    return "average";
}

DecoderSpec parse_decoder(std::string_view text) {
    if (text == "average") return {DecoderKind::kAverage, 0};
    if (text == "max") return {DecoderKind::kMax, 0};
    constexpr std::string_view suffix = "-gram";
    if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
        const auto digits = text.substr(0, text.size() - suffix.size());
        std::size_t n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 1) {
            return {DecoderKind::kNGram, n};
        }
    }
    throw ValidationError("unknown decoder '" + std::string(text) + "'");
}

namespace {

template <typename Fn>
void for_each_ngram(const std::vector<std::uint32_t>& order, std::size_t n, Fn&& fn) {
    if (order.size() < n) {
        return;
    }
    std::vector<std::uint32_t> key(n);
    for (std::size_t s = 0; s + n <= order.size(); ++s) {
        std::copy(order.begin() + static_cast<std::ptrdiff_t>(s),
                  order.begin() + static_cast<std::ptrdiff_t>(s + n), key.begin());
        fn(key);
    }
}

// Index of the largest entry, ties to the lowest index; -1 if none is finite.
int argmax(const std::vector<double>& v) {
    int best = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > -std::numeric_limits<double>::infinity() &&
            (best < 0 || v[i] > v[static_cast<std::size_t>(best)])) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

LabelAssignment assign_labels(const std::vector<SampleResponse>& responses,
                              const std::vector<int>& labels, std::size_t classes,
                              std::size_t ngram_n) {
    if (responses.size() != labels.size()) {
        throw ValidationError("assign_labels: response and label counts differ");
    }
    if (classes == 0) {
        throw ValidationError("assign_labels: no classes");
    }
    const std::size_t neurons = responses.empty() ? 0 : responses.front().counts.size();
    std::vector<double> per_class(classes, 0.0);
    std::vector<std::vector<double>> totals(neurons, std::vector<double>(classes, 0.0));
    for (std::size_t s = 0; s < responses.size(); ++s) {
        const auto c = static_cast<std::size_t>(labels[s]);
        if (c >= classes) throw ValidationError("assign_labels: label out of range");
        per_class[c] += 1.0;
        for (std::size_t j = 0; j < neurons; ++j) {
            totals[j][c] += responses[s].counts[j];
        }
    }

    LabelAssignment out;
    out.classes = classes;
    out.labels.assign(neurons, 0);
    out.dead.assign(neurons, true);
    for (std::size_t j = 0; j < neurons; ++j) {
        double best = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            if (per_class[c] == 0.0) continue;
            const double rate = totals[j][c] / per_class[c];
            if (rate > best) {
                best = rate;
                out.labels[j] = static_cast<int>(c);
                out.dead[j] = false;
            }
        }
    }

    if (ngram_n > 0) {
        NGramTable table;
        table.n = ngram_n;
        for (std::size_t s = 0; s < responses.size(); ++s) {
            for_each_ngram(responses[s].order, ngram_n, [&](const std::vector<std::uint32_t>& key) {
                auto& scores = table.scores[key];
                if (scores.empty()) scores.assign(classes, 0.0);
                scores[static_cast<std::size_t>(labels[s])] += 1.0;
            });
        }
        out.ngram = std::move(table);
    }
    return out;
}

int predict(const SampleResponse& r, const LabelAssignment& a, const DecoderSpec& decoder) {
    const std::size_t neurons = a.labels.size();
    if (r.counts.size() != neurons) {
        throw ValidationError("predict: response size differs from the label assignment");
    }
    switch (decoder.kind) {
        case DecoderKind::kMax: {
            std::uint32_t best = 0;
            int label = 0;
            for (std::size_t j = 0; j < neurons; ++j) {
                if (!a.dead[j] && r.counts[j] > best) {
                    best = r.counts[j];
                    label = a.labels[j];
                }
            }
            return label;
        }
        case DecoderKind::kAverage: {
            std::vector<double> sum(a.classes, 0.0);
            std::vector<double> members(a.classes, 0.0);
            double total = 0.0;
            for (std::size_t j = 0; j < neurons; ++j) {
                if (a.dead[j]) continue;
                const auto c = static_cast<std::size_t>(a.labels[j]);
                sum[c] += r.counts[j];
                members[c] += 1.0;
                total += r.counts[j];
            }
            if (total == 0.0) return 0;
            for (std::size_t c = 0; c < a.classes; ++c) {
                sum[c] = members[c] > 0.0 ? sum[c] / members[c]
                                          : -std::numeric_limits<double>::infinity();
            }
            return std::max(0, argmax(sum));
        }
        case DecoderKind::kNGram: {
            if (!a.ngram || a.ngram->n != decoder.n) {
                throw ValidationError("n-gram decoder used without a matching n-gram table");
            }
            std::vector<double> score(a.classes, 0.0);
            double total = 0.0;
            for_each_ngram(r.order, decoder.n, [&](const std::vector<std::uint32_t>& key) {
                auto it = a.ngram->scores.find(key);
                if (it == a.ngram->scores.end()) return;
                for (std::size_t c = 0; c < a.classes; ++c) {
                    score[c] += it->second[c];
                    total += it->second[c];
                }
            });
            if (total == 0.0) return 0;
            return std::max(0, argmax(score));
        }
    }
    return 0;
}

double accuracy(const std::vector<SampleResponse>& responses, const std::vector<int>& labels,
                const LabelAssignment& assignment, const DecoderSpec& decoder) {
    if (responses.size() != labels.size()) {
        throw ValidationError("accuracy: response and label counts differ");
    }
    if (responses.empty()) {
        throw ValidationError("accuracy: empty evaluation set");
    }
    std::size_t correct = 0;
    for (std::size_t s = 0; s < responses.size(); ++s) {
        if (predict(responses[s], assignment, decoder) == labels[s]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(responses.size());
}

}  // namespace spikehpo::snn
