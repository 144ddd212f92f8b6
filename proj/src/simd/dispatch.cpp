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

#include "spikehpo/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace spikehpo::simd {

namespace {

bool cpu_has_avx2() {
#if defined(SPIKEHPO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{&kernels(default_isa())};
    return table;
}

std::atomic<Isa>& active_tag() {
    static std::atomic<Isa> tag{default_isa()};
    return tag;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::kScalar:
            return "scalar";
        case Isa::kAvx2:
            return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    static const bool has_avx2 = cpu_has_avx2();
    return isa == Isa::kScalar || (isa == Isa::kAvx2 && has_avx2);
}

Isa default_isa() {
    if (const char* env = std::getenv("SPIKEHPO_SIMD")) {
        const std::string want(env);
        if (want == "scalar") {
            return Isa::kScalar;
        }
        if (want == "avx2" && isa_supported(Isa::kAvx2)) {
            return Isa::kAvx2;
        }
    }
    return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa active_isa() { return active_tag().load(); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("ISA not supported on this host: " + std::string(isa_name(isa)));
    }
    active_table().store(&kernels(isa));
    active_tag().store(isa);
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_relaxed); }

const KernelTable& kernels(Isa isa) {
#ifdef SPIKEHPO_HAVE_AVX2
    if (isa == Isa::kAvx2) {
        return avx2::kTable;
    }
#endif
    (void)isa;
    return scalar::kTable;
}

}  // namespace spikehpo::simd
