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

// Distinct namespace name keeps these AVX2/FMA instantiations apart from the
// baseline ones in linalg_scalar.cpp.
#define Eigen spikehpo_eigen_avx2
#define SPIKEHPO_LINALG_NS avx2
#include "linalg_impl.inl"
