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
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "spikehpo/searchspace.hpp"
#include "spikehpo/surrogate.hpp"
#include "spikehpo/trial.hpp"

namespace spikehpo {

/// Trust-region and acquisition settings. Zero-valued counts are resolved from
/// the search-space dimension by Scbo.
struct ScboConfig {
    std::size_t n_init = 0;    // 0: 2 * dimension
    std::size_t n_cand = 0;    // 0: min(5000, 100 * dimension)
    std::size_t q = 1;
    double length_init = 0.8;
    double length_min = 0.0078125;  // 0.5^7
    double length_max = 1.6;
    std::size_t succ_tol = 3;
    std::size_t fail_tol = 0;  // 0: max(dimension, 5)
    /// Feasible observations enter the constraint models as -feasibility_margin.
    double feasibility_margin = 0.01;
    /// Negative: min(1, 20 / dimension).
    double perturb_probability = -1.0;
    /// Whether stopped trials enter the objective model.
    bool stopped_in_objective = true;
    std::size_t fit_restarts = 4;
    std::size_t fit_iterations = 30;

    /// Copy with the dimension-dependent defaults filled in; throws ValidationError.
    ScboConfig resolved(std::size_t dimension) const;
};

/// Edge-length state machine of a trust region.
class TrustRegion {
public:
    enum class Event { kNone, kExpanded, kShrunk, kRestarted };

    TrustRegion() = default;
    TrustRegion(double length_init, double length_min, double length_max, std::size_t succ_tol,
                std::size_t fail_tol);

    Event record(bool success);

    double length() const { return length_; }
    std::size_t successes() const { return successes_; }
    std::size_t failures() const { return failures_; }
    std::size_t restarts() const { return restarts_; }

private:
    double length_init_ = 0.8;
    double length_min_ = 0.0078125;
    double length_max_ = 1.6;
    std::size_t succ_tol_ = 3;
    std::size_t fail_tol_ = 5;
    double length_ = 0.8;
    std::size_t successes_ = 0;
    std::size_t failures_ = 0;
    std::size_t restarts_ = 0;
};

struct Proposal {
    std::int64_t trial_id = 0;
    Configuration config;
    UnitPoint unit;
    TrialOrigin origin = TrialOrigin::kDesign;
    std::size_t restart_round = 0;
};

/// What one select_batch call looked at, for diagnostics.
struct SelectionTrace {
    std::vector<UnitPoint> candidates;
    std::vector<double> objective;                 // objective draw per candidate
    std::vector<std::vector<double>> constraints;  // one draw per constraint model
    std::vector<std::size_t> chosen;               // candidate indices, selection order
};

/// Picks q candidate indices: sample-feasible ones (every constraint draw <= 0) by
/// decreasing objective draw, then the rest by increasing sum of positive
/// constraint draws. Ties go to the lower index.
std::vector<std::size_t> select_indices(std::span<const double> objective,
                                        const std::vector<std::vector<double>>& constraints,
                                        std::size_t q);

/// Scalable constrained Bayesian optimization over a SearchSpace, maximizing
/// the objective subject to violation == 0 for every constraint.
/// Not thread-safe; one coordinator owns it.
class Scbo {
public:
    Scbo(SearchSpace space, std::size_t n_constraints, const ScboConfig& config,
         std::uint64_t seed);

    const SearchSpace& space() const { return space_; }
    const ScboConfig& config() const { return config_; }
    std::size_t constraint_count() const { return n_constraints_; }

    /// Next configuration: queued design points first, then a Thompson-sampling
    /// selection. Falls back to a prior sample while fewer than two trials are
    /// complete.
    Proposal propose();

    /// q selections from fresh posterior draws; fits the models if stale.
    std::vector<Proposal> select_batch(std::size_t q, SelectionTrace* trace = nullptr);

    /// Candidate points inside the trust region around the incumbent.
    std::vector<UnitPoint> generate_candidates(std::size_t n_cand);

    /// Records a finished trial; throws ValidationError on a duplicate trial_id
    /// or a violation vector of the wrong length.
    void update(TrialRecord trial);

    std::optional<TrialRecord> incumbent() const;

    /// Refits the surrogate models when new data arrived since the last fit.
    void fit_models();

    const TrustRegion& region() const { return region_; }
    const std::vector<TrialRecord>& history() const { return history_; }
    std::size_t pending_count() const { return pending_.size(); }
    std::size_t queued_design() const { return design_.size(); }
    std::size_t restarts() const { return region_.restarts(); }
    std::size_t model_fits() const { return fits_; }
    const std::optional<GPModel>& objective_model() const { return objective_model_; }
    const std::vector<std::optional<GPModel>>& constraint_models() const {
        return constraint_models_;
    }

private:
    Proposal make_proposal(Configuration config, TrialOrigin origin);
    void queue_design(TrialOrigin origin);
    GPModel fit_one(const std::vector<UnitPoint>& x, const std::vector<double>& y,
                    const std::optional<GPModel>& previous);

    SearchSpace space_;
    std::size_t n_constraints_;
    ScboConfig config_;
    Rng rng_;
    TrustRegion region_;
    std::deque<Proposal> design_;
    std::map<std::int64_t, Proposal> pending_;
    std::vector<TrialRecord> history_;
    std::set<std::int64_t> seen_ids_;
    std::optional<std::size_t> best_;  // index into history_
    std::int64_t next_id_ = 0;
    bool dirty_ = false;
    std::size_t fits_ = 0;
    std::optional<GPModel> objective_model_;
    std::vector<std::optional<GPModel>> constraint_models_;
};

}  // namespace spikehpo
