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

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fhdr {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Error types. Everything thrown by the library derives from one of the
// standard exception classes so callers can catch broadly.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class BracketError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class RankDeficient : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double eig_reconstruction = 1e-10;
inline constexpr double hermitian = 1e-10;
inline constexpr double bisection = 1e-9;
inline constexpr double phase_zero = 1e-12;
// Relative eigenvalue gap below which eigenvalues are treated as one cluster.
inline constexpr double eig_cluster = 1e-10;
inline constexpr int bisection_max_iter = 200;
}  // namespace tol

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in non-increasing order; column i of `vectors` pairs
/// with `values(i)`. Within a cluster of (numerically) equal eigenvalues the
/// basis is canonical: Gram-Schmidt of the cluster projector applied to
/// e_1, e_2, ... in index order. Every column is phase-normalised so that its
/// first entry with magnitude above 1e-12 is real and non-negative. Together
/// these make the decomposition a deterministic function of the input.
struct HermitianEig {
    RVec values;
    CMat vectors;
};

HermitianEig hermitian_eig(const CMat& A);

/// First N columns of hermitian_eig(A).vectors.
CMat principal_subspace(const CMat& A, int N);

/// Thin orthonormal basis for the column span of M (full column rank
/// required), phase-normalised column by column.
CMat orthonormalize(const CMat& M);

/// Orthonormal basis (M x (M - N)) for the orthogonal complement of the
/// columns of W, where W has orthonormal columns. Empty when N == M.
CMat orthonormal_complement(const CMat& W);

/// Rotate each column so its first non-negligible entry is real and >= 0.
void normalize_column_phases(CMat& U);

/// log2 det(A) for Hermitian positive definite A, via Cholesky.
/// Throws RankDeficient if the factorisation fails.
double log2det_pd(const CMat& A);

/// log2 det(I + X) for Hermitian positive semi-definite X.
double log2det_eye_plus(const CMat& X);

/// Solve f(x) = target for monotone non-increasing f on [lo, hi].
///
/// The bracket must satisfy f(lo) >= target >= f(hi). Bisection is done in
/// log-space when lo > 0 (the quantisation levels this is used for span many
/// decades). Returns x with |f(x) - target| <= tol.
double bisect_monotone(const std::function<double(double)>& f, double target, double lo, double hi,
                       double tol = tol::bisection);

bool all_finite(const CMat& A);

}  // namespace fhdr
