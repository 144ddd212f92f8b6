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

// Internal: per-ISA dense linear algebra entry points. Each ISA gets its own
// translation unit that instantiates Eigen under a private namespace name, so
// the baseline and AVX2 template instantiations never merge at link time.

#include <cstddef>

#define SPIKEHPO_DECLARE_LINALG(ns)                                                      \
    namespace spikehpo::simd::ns {                                                       \
    bool cholesky(double* a, std::size_t n);                                             \
    void solve_lower(const double* l, std::size_t n, double* b, std::size_t cols);       \
    void solve_lower_transposed(const double* l, std::size_t n, double* b,               \
                                std::size_t cols);                                       \
    void gram_subtract(double* c, const double* v, std::size_t k, std::size_t m);        \
    void cholesky_inverse(const double* l, std::size_t n, double* out);                  \
    }

SPIKEHPO_DECLARE_LINALG(scalar)
SPIKEHPO_DECLARE_LINALG(avx2)

#undef SPIKEHPO_DECLARE_LINALG
