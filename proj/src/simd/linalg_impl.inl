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

// Included once per ISA translation unit with SPIKEHPO_LINALG_NS defined.
// The including file renames the Eigen namespace before this point.

#include <Eigen/Dense>

#include "linalg.hpp"

namespace spikehpo::simd::SPIKEHPO_LINALG_NS {

namespace {
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using MatMap = Eigen::Map<Mat>;
using ConstMatMap = Eigen::Map<const Mat>;
}  // namespace

bool cholesky(double* a, std::size_t n) {
    MatMap m(a, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::LLT<Eigen::Ref<Mat>> llt(m);
    if (llt.info() != Eigen::Success) {
        return false;
    }
    m.triangularView<Eigen::StrictlyUpper>().setZero();
    return true;
}

void solve_lower(const double* l, std::size_t n, double* b, std::size_t cols) {
    const auto rows = static_cast<Eigen::Index>(n);
    ConstMatMap lm(l, rows, rows);
    MatMap bm(b, rows, static_cast<Eigen::Index>(cols));
    lm.triangularView<Eigen::Lower>().solveInPlace(bm);
}

void solve_lower_transposed(const double* l, std::size_t n, double* b, std::size_t cols) {
    const auto rows = static_cast<Eigen::Index>(n);
    ConstMatMap lm(l, rows, rows);
    MatMap bm(b, rows, static_cast<Eigen::Index>(cols));
    lm.transpose().triangularView<Eigen::Upper>().solveInPlace(bm);
}

namespace {

// In-place inverse of the lower triangle by 2x2 block recursion:
// inv([A 0; B C]) = [inv(A) 0; -inv(C) B inv(A) inv(C)].
void invert_lower(Eigen::Ref<Mat> l) {
    const Eigen::Index n = l.rows();
    if (n <= 32) {
        Mat id = Mat::Identity(n, n);
        l.triangularView<Eigen::Lower>().solveInPlace(id);
        l.triangularView<Eigen::Lower>() = id;
        return;
    }
    const Eigen::Index h = n / 2;
    invert_lower(l.topLeftCorner(h, h));
    invert_lower(l.bottomRightCorner(n - h, n - h));
    Mat b = l.bottomLeftCorner(n - h, h);
    b = l.bottomRightCorner(n - h, n - h).triangularView<Eigen::Lower>() * b;
    b = (b * l.topLeftCorner(h, h).triangularView<Eigen::Lower>()).eval();
    l.bottomLeftCorner(n - h, h) = -b;
}

// In place, lower triangle: M <- M^T M for lower triangular M. With
// M = [A 0; B C]: M^T M = [A^T A + B^T B, .; C^T B, C^T C].
void lower_gram(Eigen::Ref<Mat> m) {
    const Eigen::Index n = m.rows();
    if (n <= 32) {
        Mat t = m.triangularView<Eigen::Lower>();
        Mat r = t.transpose() * t;
        m.triangularView<Eigen::Lower>() = r;
        return;
    }
    const Eigen::Index h = n / 2;
    auto a = m.topLeftCorner(h, h);
    auto b = m.bottomLeftCorner(n - h, h);
    auto c = m.bottomRightCorner(n - h, n - h);
    lower_gram(a);
    a.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
    b = (c.transpose().triangularView<Eigen::Upper>() * b).eval();
    lower_gram(c);
}

}  // namespace

void cholesky_inverse(const double* l, std::size_t n, double* out) {
    const auto rows = static_cast<Eigen::Index>(n);
    MatMap om(out, rows, rows);
    om = ConstMatMap(l, rows, rows);
    invert_lower(om);
    lower_gram(om);
    om.triangularView<Eigen::StrictlyUpper>() = om.transpose();
}

void gram_subtract(double* c, const double* v, std::size_t k, std::size_t m) {
    const auto cols = static_cast<Eigen::Index>(m);
    MatMap cm(c, cols, cols);
    ConstMatMap vm(v, static_cast<Eigen::Index>(k), cols);
    cm.selfadjointView<Eigen::Lower>().rankUpdate(vm.transpose(), -1.0);
}

}  // namespace spikehpo::simd::SPIKEHPO_LINALG_NS
