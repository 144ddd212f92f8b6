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

#include "spikehpo/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace spikehpo {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0,
                           const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    LbfgsResult result;
    std::vector<double> x = std::move(x0);
    std::vector<double> g(n);
    double fx = f(x, g);
    result.evaluations = 1;
    if (!std::isfinite(fx)) {
        result.x = std::move(x);
        result.value = fx;
        return result;
    }

    std::deque<Pair> history;
    std::vector<double> dir(n), x_new(n), g_new(n), alpha_buf;

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        const double gnorm = std::sqrt(dot(g, g));
        if (gnorm <= options.gradient_tolerance) {
            break;
        }

        // Two-loop recursion: dir = -H g.
        for (std::size_t i = 0; i < n; ++i) {
            dir[i] = -g[i];
        }
        alpha_buf.assign(history.size(), 0.0);
        for (std::size_t k = history.size(); k-- > 0;) {
            alpha_buf[k] = history[k].rho * dot(history[k].s, dir);
            for (std::size_t i = 0; i < n; ++i) {
                dir[i] -= alpha_buf[k] * history[k].y[i];
            }
        }
        if (!history.empty()) {
            const auto& last = history.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (auto& d : dir) {
                d *= gamma;
            }
        } else {
            for (auto& d : dir) {
                d /= std::max(1.0, gnorm);
            }
        }
        for (std::size_t k = 0; k < history.size(); ++k) {
            const double beta = history[k].rho * dot(history[k].y, dir);
            for (std::size_t i = 0; i < n; ++i) {
                dir[i] += (alpha_buf[k] - beta) * history[k].s[i];
            }
        }

        double slope = dot(g, dir);
        if (!(slope < 0.0)) {
            history.clear();
            for (std::size_t i = 0; i < n; ++i) {
                dir[i] = -g[i] / std::max(1.0, gnorm);
            }
            slope = dot(g, dir);
        }

        // Armijo backtracking.
        double step = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < n; ++i) {
                x_new[i] = x[i] + step * dir[i];
            }
            f_new = f(x_new, g_new);
            ++result.evaluations;
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++result.iterations;
        if (!accepted) {
            break;
        }

        Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            p.s[i] = x_new[i] - x[i];
            p.y[i] = g_new[i] - g[i];
        }
        const double sy = dot(p.s, p.y);
        const double f_old = fx;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (sy > 1e-12) {
            p.rho = 1.0 / sy;
            history.push_back(std::move(p));
            if (history.size() > options.memory) {
                history.pop_front();
            }
        }
        if (std::abs(f_old - fx) <= options.relative_tolerance * std::max(1.0, std::abs(fx))) {
            break;
        }
    }

    result.x = std::move(x);
    result.value = fx;
    return result;
}

}  // namespace spikehpo
