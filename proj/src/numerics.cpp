// SPDX-License-Identifier: Apache-2.0
//
// fhdr: dimension-reduction fronthaul compression for distributed MIMO C-RAN
// Copyright (C) 2026 The fhdr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fhdr/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace fhdr {

namespace {

// Orthonormal basis of rank `count` for the range of the orthogonal projector
// P, built by Gram-Schmidt over P e_0, P e_1, ... in index order.
CMat canonical_basis(const CMat& P, int count) {
    const Eigen::Index n = P.rows();
    CMat basis(n, count);
    int accepted = 0;
    for (Eigen::Index j = 0; j < n && accepted < count; ++j) {
        CVec v = P.col(j);
        // two passes of classical Gram-Schmidt keep the result orthogonal
        for (int pass = 0; pass < 2; ++pass) {
            for (int a = 0; a < accepted; ++a) v -= basis.col(a) * basis.col(a).dot(v);
        }
        const double norm = v.norm();
        if (norm > 1e-4) {
            basis.col(accepted++) = v / norm;
        }
    }
    if (accepted < count) {
        // P is not a clean projector of the expected rank; fall back to the
        // dominant directions of P itself.
        Eigen::SelfAdjointEigenSolver<CMat> es((P + P.adjoint()) / 2.0);
        for (Eigen::Index j = n - 1; j >= 0 && accepted < count; --j) {
            CVec v = es.eigenvectors().col(j);
            for (int pass = 0; pass < 2; ++pass) {
                for (int a = 0; a < accepted; ++a) v -= basis.col(a) * basis.col(a).dot(v);
            }
            const double norm = v.norm();
            if (norm > 1e-8) basis.col(accepted++) = v / norm;
        }
    }
    if (accepted < count) throw ConvergenceError("canonical_basis: could not complete basis");
    return basis;
}

}  // namespace

bool all_finite(const CMat& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag())) return false;
    return true;
}

void normalize_column_phases(CMat& U) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        for (Eigen::Index i = 0; i < U.rows(); ++i) {
            const double mag = std::abs(U(i, j));
            if (mag > tol::phase_zero) {
                const cplx phase = std::conj(U(i, j)) / mag;
                U.col(j) *= phase;
                U(i, j) = cplx(std::abs(U(i, j)), 0.0);
                break;
            }
        }
    }
}

HermitianEig hermitian_eig(const CMat& A) {
    if (A.rows() != A.cols()) throw InvalidInput("hermitian_eig: matrix must be square");
    if (!all_finite(A)) throw InvalidInput("hermitian_eig: non-finite entries");
    const Eigen::Index n = A.rows();
    HermitianEig out;
    if (n == 0) return out;

    const CMat S = (A + A.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(S);
    if (es.info() != Eigen::Success) throw ConvergenceError("hermitian_eig: eigensolver failed");

    // Eigen returns ascending order; reverse with a stable sort so equal values
    // keep a fixed relative order before the cluster canonicalisation below.
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const RVec& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = ev(order[i]);
        out.vectors.col(i) = es.eigenvectors().col(order[i]);
    }

    const double scale = std::max(out.values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double gap = tol::eig_cluster * scale;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.values(end - 1) - out.values(end) <= gap) ++end;
        const Eigen::Index m = end - start;
        if (m > 1) {
            const CMat Q = out.vectors.middleCols(start, m);
            out.vectors.middleCols(start, m) = canonical_basis(Q * Q.adjoint(), static_cast<int>(m));
            const double mean = out.values.segment(start, m).mean();
            out.values.segment(start, m).setConstant(mean);
        }
        start = end;
    }
    normalize_column_phases(out.vectors);
    return out;
}

CMat principal_subspace(const CMat& A, int N) {
    if (N < 1 || N > A.rows())
        throw InvalidInput("principal_subspace: N=" + std::to_string(N) + " out of range [1, " +
                           std::to_string(A.rows()) + "]");
    return hermitian_eig(A).vectors.leftCols(N);
}

CMat orthonormalize(const CMat& M) {
    if (!all_finite(M)) throw InvalidInput("orthonormalize: non-finite entries");
    const Eigen::Index n = M.rows(), k = M.cols();
    if (k > n) throw InvalidInput("orthonormalize: more columns than rows");
    CMat Q(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        CVec v = M.col(j);
        const double ref = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index a = 0; a < j; ++a) v -= Q.col(a) * Q.col(a).dot(v);
        }
        const double norm = v.norm();
        if (!(norm > 1e-12 * std::max(ref, 1.0))) throw InvalidInput("orthonormalize: rank-deficient input");
        Q.col(j) = v / norm;
    }
    normalize_column_phases(Q);
    return Q;
}

CMat orthonormal_complement(const CMat& W) {
    const Eigen::Index n = W.rows(), k = W.cols();
    if (k > n) throw InvalidInput("orthonormal_complement: more columns than rows");
    if (k == n) return CMat(n, 0);
    const CMat P = CMat::Identity(n, n) - W * W.adjoint();
    CMat B = canonical_basis(P, static_cast<int>(n - k));
    normalize_column_phases(B);
    return B;
}

double log2det_pd(const CMat& A) {
    Eigen::LLT<CMat> llt(A);
    if (llt.info() != Eigen::Success) throw RankDeficient("log2det_pd: matrix is not positive definite");
    double acc = 0.0;
    const CMat& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < A.rows(); ++i) acc += std::log2(L(i, i).real());
    return 2.0 * acc;
}

double log2det_eye_plus(const CMat& X) {
    return log2det_pd(CMat::Identity(X.rows(), X.cols()) + X);
}

double bisect_monotone(const std::function<double(double)>& f, double target, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("bisect_monotone: tol must be positive");
    if (!(lo < hi)) throw BracketError("bisect_monotone: require lo < hi");
    const double flo = f(lo), fhi = f(hi);
    if (!(flo >= target && target >= fhi)) throw BracketError("bisect_monotone: target not bracketed");
    if (std::abs(flo - target) <= tol) return lo;
    if (std::abs(fhi - target) <= tol) return hi;

    const bool geometric = lo > 0.0;
    for (int it = 0; it < tol::bisection_max_iter; ++it) {
        const double mid = geometric ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm - target) <= tol) return mid;
        if (mid <= lo || mid >= hi) break;  // interval exhausted at double precision
        if (fm > target)
            lo = mid;
        else
            hi = mid;
    }
    throw ConvergenceError("bisect_monotone: no convergence within iteration cap");
}

}  // namespace fhdr
