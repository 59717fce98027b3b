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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "fhdr/numerics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fhdr;

namespace {

double rel_err(const CMat& a, const CMat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

CMat random_hermitian(int n, RngStream& rng) {
    const CMat B = testgen::gaussian(n, n, rng);
    return 0.5 * (B + B.adjoint());
}

bool phase_ok(const CMat& U) {
    for (int j = 0; j < U.cols(); ++j) {
        for (int i = 0; i < U.rows(); ++i) {
            if (std::abs(U(i, j)) > tol::phase_zero) {
                if (std::abs(U(i, j).imag()) > 1e-12 || U(i, j).real() < 0) return false;
                break;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("hermitian_eig: identity and diagonal cases") {
    const auto e3 = hermitian_eig(CMat::Identity(3, 3));
    CHECK((e3.values - RVec::Ones(3)).norm() < 1e-14);
    CHECK(rel_err(e3.vectors, CMat::Identity(3, 3)) < 1e-12);

    CMat D = CMat::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = 3.0;
    const auto ed = hermitian_eig(D);
    CHECK(ed.values(0) == doctest::Approx(3.0));
    CHECK(ed.values(1) == doctest::Approx(1.0));
    CHECK(std::abs(ed.vectors(1, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(ed.vectors(0, 1) - cplx(1.0)) < 1e-12);
}

TEST_CASE("hermitian_eig: contracts on random matrices") {
    RngStream rng(11);
    for (int t = 0; t < 200; ++t) {
        const int n = testgen::uniform_int(rng, 1, 8);
        const CMat A = random_hermitian(n, rng);
        const auto e = hermitian_eig(A);
        const CMat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
        CHECK((back - A).norm() <= 1e-10 * std::max(1.0, A.norm()));
        CHECK(rel_err(e.vectors.adjoint() * e.vectors, CMat::Identity(n, n)) < 1e-10);
        for (int i = 1; i < n; ++i) CHECK(e.values(i) <= e.values(i - 1));
        CHECK(phase_ok(e.vectors));
    }
}

TEST_CASE("hermitian_eig: deterministic under repeated calls and clustered spectra") {
    RngStream rng(12);
    const CMat U = testgen::orthonormal(5, 5, rng);
    RVec lam(5);
    lam << 4, 2, 2, 2, 1;
    const CMat A = U * lam.cast<cplx>().asDiagonal() * U.adjoint();
    const auto a = hermitian_eig(A);
    const auto b = hermitian_eig(CMat(A));
    CHECK((a.vectors - b.vectors).norm() == 0.0);
    CHECK(phase_ok(a.vectors));
    CHECK((a.values - lam).norm() < 1e-10);
}

TEST_CASE("hermitian_eig: non-finite input is rejected") {
    CMat A = CMat::Identity(2, 2);
    A(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(hermitian_eig(A), InvalidInput);
}

TEST_CASE("principal_subspace: examples") {
    CMat D = CMat::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    CHECK(rel_err(principal_subspace(D, 1), CMat::Identity(2, 1)) < 1e-12);
    CHECK(rel_err(principal_subspace(CMat::Identity(2, 2), 1), CMat::Identity(2, 1)) < 1e-12);
    CHECK_THROWS_AS(principal_subspace(D, 0), InvalidInput);
    CHECK_THROWS_AS(principal_subspace(D, 3), InvalidInput);

    RngStream rng(13);
    for (int t = 0; t < 50; ++t) {
        const CMat A = testgen::psd(6, rng);
        const CMat W = principal_subspace(A, 2);
        const auto e = hermitian_eig(A);
        const double lhs = std::real((W.adjoint() * A * W).determinant());
        CHECK(lhs == doctest::Approx(e.values(0) * e.values(1)).epsilon(1e-9));
        CHECK(rel_err(W.adjoint() * W, CMat::Identity(2, 2)) < 1e-10);
    }
}

TEST_CASE("Poincare separation: random orthonormal W never beats the principal subspace") {
    RngStream rng(14);
    for (int t = 0; t < 1000; ++t) {
        const int n = testgen::uniform_int(rng, 2, 7);
        const int N = testgen::uniform_int(rng, 1, n);
        const CMat A = testgen::psd(n, rng);
        const CMat I = CMat::Identity(n, n);
        const auto e = hermitian_eig(A);
        double bound = 0.0;
        for (int i = 0; i < N; ++i) bound += std::log2(1.0 + e.values(i));
        const CMat P = principal_subspace(A, N);
        CHECK(oracle::log2det_eig(P.adjoint() * (I + A) * P) == doctest::Approx(bound).epsilon(1e-9));
        const CMat W = testgen::orthonormal(n, N, rng);
        CHECK(oracle::log2det_eig(W.adjoint() * (I + A) * W) <= bound + 1e-9);
    }
}

TEST_CASE("orthonormalize and complement") {
    RngStream rng(15);
    for (int t = 0; t < 100; ++t) {
        const int n = testgen::uniform_int(rng, 2, 7);
        const int N = testgen::uniform_int(rng, 1, n);
        const CMat M = testgen::gaussian(n, N, rng);
        const CMat Q = orthonormalize(M);
        CHECK(rel_err(Q.adjoint() * Q, CMat::Identity(N, N)) < 1e-10);
        // same column span
        CHECK((M - Q * (Q.adjoint() * M)).norm() < 1e-9 * M.norm());
        CHECK(phase_ok(Q));
        const CMat C = orthonormal_complement(Q);
        CHECK(C.cols() == n - N);
        if (C.cols() > 0) {
            CHECK((Q.adjoint() * C).norm() < 1e-10);
            CHECK(rel_err(C.adjoint() * C, CMat::Identity(n - N, n - N)) < 1e-10);
        }
    }
}

TEST_CASE("log-determinants agree with an eigenvalue oracle") {
    RngStream rng(16);
    for (int t = 0; t < 200; ++t) {
        const int n = testgen::uniform_int(rng, 1, 8);
        const CMat X = testgen::psd(n, rng, testgen::uniform_int(rng, 1, n));
        const CMat I = CMat::Identity(n, n);
        CHECK(log2det_eye_plus(X) == doctest::Approx(oracle::log2det_eig(I + X)).epsilon(1e-10));
        CHECK(log2det_pd(I + X) == doctest::Approx(oracle::log2det_eig(I + X)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(log2det_pd(CMat::Zero(2, 2)), RankDeficient);
}

TEST_CASE("bisect_monotone: closed forms") {
    auto f1 = [](double d) { return std::log2(1.0 + 16.0 / d); };
    CHECK(bisect_monotone(f1, 4.0, 1e-9, 1e6) == doctest::Approx(16.0 / 15.0).epsilon(1e-8));
    auto f2 = [](double d) { return std::log2(1.0 + 1.0 / d); };
    CHECK(bisect_monotone(f2, 1.0, 1e-9, 1e6) == doctest::Approx(1.0).epsilon(1e-8));
    auto f3 = [](double d) { return 2.0 * std::log2(1.0 + 4.0 / d); };
    CHECK(bisect_monotone(f3, 6.0, 1e-9, 1e6) == doctest::Approx(4.0 / 7.0).epsilon(1e-8));
}

TEST_CASE("bisect_monotone: residual and bracket independence") {
    RngStream rng(17);
    for (int t = 0; t < 200; ++t) {
        const RVec s = testgen::positive(testgen::uniform_int(rng, 1, 6), rng, 1.0, 1e5);
        const double R = testgen::log_uniform(rng, 0.1, 60.0);
        auto f = [&](double d) {
            double r = 0.0;
            for (int i = 0; i < s.size(); ++i) r += std::log2(1.0 + s(i) / d);
            return r;
        };
        const double a = bisect_monotone(f, R, 1e-30, 1e30);
        const double b = bisect_monotone(f, R, 1e-20 * testgen::log_uniform(rng, 1.0, 1e5), 1e12);
        CHECK(std::abs(f(a) - R) <= tol::bisection);
        CHECK(std::abs(f(b) - R) <= tol::bisection);
        CHECK(std::abs(f(a) - f(b)) <= 2 * tol::bisection);
    }
}

TEST_CASE("bisect_monotone: errors") {
    auto f = [](double d) { return std::log2(1.0 + 1.0 / d); };
    CHECK_THROWS_AS(bisect_monotone(f, 1.0, 2.0, 3.0), BracketError);
    // A step function can never meet a tight residual.
    auto step = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(bisect_monotone(step, 0.5, 0.0, 2.0, 1e-12), ConvergenceError);
}
