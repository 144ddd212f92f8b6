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

#include "spikehpo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spikehpo {

ScboConfig ScboConfig::resolved(std::size_t dimension) const {
    if (dimension == 0) {
        throw ValidationError("scbo: empty search space");
    }
    ScboConfig c = *this;
    if (c.n_init == 0) c.n_init = 2 * dimension;
    if (c.n_cand == 0) c.n_cand = std::min<std::size_t>(5000, 100 * dimension);
    if (c.fail_tol == 0) c.fail_tol = std::max<std::size_t>(dimension, 5);
    if (c.perturb_probability < 0.0) {
        c.perturb_probability = std::min(1.0, 20.0 / static_cast<double>(dimension));
    }
    if (c.n_init < 2) throw ValidationError("scbo.n_init must be at least 2");
    if (c.q < 1) throw ValidationError("scbo.q must be at least 1");
    if (c.succ_tol < 1) throw ValidationError("scbo.succ_tol must be at least 1");
    if (!(c.length_min > 0.0 && c.length_min <= c.length_init && c.length_init <= c.length_max)) {
        throw ValidationError("scbo: need 0 < length_min <= length_init <= length_max");
    }
    if (!(c.feasibility_margin > 0.0)) {
        throw ValidationError("scbo.feasibility_margin must be positive");
    }
    if (c.perturb_probability > 1.0) {
        throw ValidationError("scbo.perturb_probability must lie in [0,1]");
    }
    if (c.fit_restarts < 1) throw ValidationError("scbo.fit_restarts must be at least 1");
    return c;
}

TrustRegion::TrustRegion(double length_init, double length_min, double length_max,
                         std::size_t succ_tol, std::size_t fail_tol)
    : length_init_(length_init),
      length_min_(length_min),
      length_max_(length_max),
      succ_tol_(succ_tol),
      fail_tol_(fail_tol),
      length_(length_init) {}

TrustRegion::Event TrustRegion::record(bool success) {
    if (success) {
        ++successes_;
        failures_ = 0;
        if (successes_ == succ_tol_) {
            successes_ = 0;
            length_ = std::min(2.0 * length_, length_max_);
            return Event::kExpanded;
        }
        return Event::kNone;
    }
    ++failures_;
    successes_ = 0;
    if (failures_ == fail_tol_) {
        failures_ = 0;
        length_ /= 2.0;
        if (length_ < length_min_) {
            length_ = length_init_;
            ++restarts_;
            return Event::kRestarted;
        }
        return Event::kShrunk;
    }
    return Event::kNone;
}

std::vector<std::size_t> select_indices(std::span<const double> objective,
                                        const std::vector<std::vector<double>>& constraints,
                                        std::size_t q) {
    const std::size_t n = objective.size();
    for (const auto& c : constraints) {
        if (c.size() != n) {
            throw ValidationError("select_indices: draw lengths differ");
        }
    }
    std::vector<std::size_t> feasible;
    std::vector<std::size_t> infeasible;
    std::vector<double> excess(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& c : constraints) {
            excess[i] += std::max(c[i], 0.0);
        }
        (excess[i] > 0.0 ? infeasible : feasible).push_back(i);
    }
    std::stable_sort(feasible.begin(), feasible.end(),
                     [&](std::size_t a, std::size_t b) { return objective[a] > objective[b]; });
    std::stable_sort(infeasible.begin(), infeasible.end(),
                     [&](std::size_t a, std::size_t b) { return excess[a] < excess[b]; });
    std::vector<std::size_t> out;
    for (std::size_t i : feasible) {
        if (out.size() == q) break;
        out.push_back(i);
    }
    for (std::size_t i : infeasible) {
        if (out.size() == q) break;
        out.push_back(i);
    }
    return out;
}

Scbo::Scbo(SearchSpace space, std::size_t n_constraints, const ScboConfig& config,
           std::uint64_t seed)
    : space_(std::move(space)),
      n_constraints_(n_constraints),
      config_(config.resolved(space_.dimension())),
      rng_(seed),
      region_(config_.length_init, config_.length_min, config_.length_max, config_.succ_tol,
              config_.fail_tol),
      constraint_models_(n_constraints) {
    queue_design(TrialOrigin::kDesign);
}

Proposal Scbo::make_proposal(Configuration config, TrialOrigin origin) {
    Proposal p;
    p.trial_id = next_id_++;
    p.unit = space_.to_unit(config);
    p.config = std::move(config);
    p.origin = origin;
    p.restart_round = region_.restarts();
    return p;
}

void Scbo::queue_design(TrialOrigin origin) {
    for (auto& c : sample_prior(space_, config_.n_init, rng_)) {
        Proposal p;
        p.config = std::move(c);
        p.origin = origin;
        design_.push_back(std::move(p));
    }
}

Proposal Scbo::propose() {
    if (!design_.empty()) {
        Proposal p = std::move(design_.front());
        design_.pop_front();
        p = make_proposal(std::move(p.config), p.origin);
        pending_[p.trial_id] = p;
        return p;
    }
    if (history_.size() < 2) {
        Proposal p = make_proposal(std::move(sample_prior(space_, 1, rng_).front()),
                                   TrialOrigin::kDesign);
        pending_[p.trial_id] = p;
        return p;
    }
    return std::move(select_batch(1).front());
}

GPModel Scbo::fit_one(const std::vector<UnitPoint>& x, const std::vector<double>& y,
                      const std::optional<GPModel>& previous) {
    FitOptions opts;
    opts.restarts = config_.fit_restarts;
    opts.max_iterations = config_.fit_iterations;
    if (previous && previous->dimension() == space_.dimension()) {
        opts.warm_start = previous->kernel();
    }
    constexpr int kAttempts = 3;
    for (int attempt = 1;; ++attempt) {
        try {
            return GPModel::fit(x, y, opts, rng_);
        } catch (const FitError&) {
            if (attempt == kAttempts) {
                throw;
            }
            opts.warm_start.reset();
        }
    }
}

void Scbo::fit_models() {
    if (!dirty_ && objective_model_) {
        return;
    }
    std::vector<UnitPoint> xs;
    std::vector<double> ys;
    for (const auto& t : history_) {
        if (config_.stopped_in_objective || !t.stopped) {
            xs.push_back(t.unit);
            ys.push_back(t.objective);
        }
    }
    if (xs.size() < 2) {
        xs.clear();
        ys.clear();
        for (const auto& t : history_) {
            xs.push_back(t.unit);
            ys.push_back(t.objective);
        }
    }
    objective_model_ = fit_one(xs, ys, objective_model_);

    xs.clear();
    for (const auto& t : history_) {
        xs.push_back(t.unit);
    }
    for (std::size_t c = 0; c < n_constraints_; ++c) {
        std::vector<double> targets;
        targets.reserve(history_.size());
        for (const auto& t : history_) {
            const double v = t.violations[c];
            targets.push_back(v > 0.0 ? v : -config_.feasibility_margin);
        }
        constraint_models_[c] = fit_one(xs, targets, constraint_models_[c]);
    }
    dirty_ = false;
    ++fits_;
}

std::vector<UnitPoint> Scbo::generate_candidates(std::size_t n_cand) {
    const std::size_t d = space_.dimension();
    const auto best = incumbent();
    const UnitPoint center = best ? best->unit : UnitPoint(d, 0.5);

    std::vector<double> weights(d, 1.0);
    if (objective_model_) {
        const auto& ls = objective_model_->kernel().lengthscales;
        double log_mean = 0.0;
        for (double l : ls) {
            log_mean += std::log(l);
        }
        const double geo = std::exp(log_mean / static_cast<double>(d));
        for (std::size_t i = 0; i < d; ++i) {
            weights[i] = ls[i] / geo;
        }
    }
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double half = 0.5 * region_.length() * weights[i];
        lo[i] = std::clamp(center[i] - half, 0.0, 1.0);
        hi[i] = std::clamp(center[i] + half, 0.0, 1.0);
    }

    const double p = config_.perturb_probability;
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    std::vector<UnitPoint> out(n_cand, center);
    std::vector<char> mask(d);
    for (auto& cand : out) {
        bool any = false;
        for (std::size_t i = 0; i < d; ++i) {
            mask[i] = uniform01(rng_) < p;
            any = any || mask[i];
        }
        if (!any && p > 0.0) {
            mask[pick(rng_)] = 1;
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (mask[i]) {
                cand[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng_);
            }
        }
    }
    return out;
}

std::vector<Proposal> Scbo::select_batch(std::size_t q, SelectionTrace* trace) {
    if (q < 1) {
        throw ValidationError("select_batch: q must be at least 1");
    }
    fit_models();
    const auto candidates = generate_candidates(config_.n_cand);
    const auto objective = objective_model_->thompson_draw(candidates, rng_);
    std::vector<std::vector<double>> constraints;
    for (const auto& m : constraint_models_) {
        constraints.push_back(m->thompson_draw(candidates, rng_));
    }
    const auto chosen = select_indices(objective, constraints, q);
    std::vector<Proposal> out;
    for (std::size_t i : chosen) {
        Proposal p = make_proposal(space_.from_unit(candidates[i]), TrialOrigin::kScbo);
        pending_[p.trial_id] = p;
        out.push_back(std::move(p));
    }
    if (trace != nullptr) {
        trace->candidates = candidates;
        trace->objective = objective;
        trace->constraints = std::move(constraints);
        trace->chosen = chosen;
    }
    return out;
}

std::optional<TrialRecord> Scbo::incumbent() const {
    if (!best_) {
        return std::nullopt;
    }
    return history_[*best_];
}

void Scbo::update(TrialRecord trial) {
    if (!seen_ids_.insert(trial.trial_id).second) {
        throw ValidationError("duplicate trial_id " + std::to_string(trial.trial_id));
    }
    if (trial.violations.size() != n_constraints_) {
        seen_ids_.erase(trial.trial_id);
        throw ValidationError("trial " + std::to_string(trial.trial_id) + " reports " +
                              std::to_string(trial.violations.size()) + " violations, expected " +
                              std::to_string(n_constraints_));
    }
    pending_.erase(trial.trial_id);
    trial.unit = space_.to_unit(trial.config);
    const bool success = !best_ || better_trial(trial, history_[*best_]);
    history_.push_back(std::move(trial));
    dirty_ = true;
    if (success) {
        best_ = history_.size() - 1;
    }
    if (history_.back().origin != TrialOrigin::kScbo) {
        return;
    }
    if (region_.record(success) == TrustRegion::Event::kRestarted) {
        queue_design(TrialOrigin::kRestart);
    }
}

}  // namespace spikehpo
