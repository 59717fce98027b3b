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

#include "fhdr/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>

#include "fhdr/compression.hpp"
#include "fhdr/dimred.hpp"
#include "fhdr/rng.hpp"

namespace fhdr {

namespace {

int pick(RngStream& rng, int lo, int hi) {
    return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

CMat gaussian(RngStream& rng, Eigen::Index r, Eigen::Index c) {
    CMat A(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) A(i, j) = rng.complex_normal(1.0);
    return A;
}

// Random network with per-receiver gain spread of two decades.
ChannelSet random_network(RngStream& rng) {
    ChannelSet cs;
    const int K = pick(rng, 2, 8), L = pick(rng, 2, 4);
    const int M = std::max(pick(rng, 2, 8), (K + L - 1) / L);
    for (int l = 0; l < L; ++l) cs.H.push_back(gaussian(rng, M, K) * std::pow(10.0, rng.uniform() - 0.5));
    cs.rho = std::pow(10.0, 3.0 * rng.uniform() - 0.5);
    return cs;
}

int random_dim(RngStream& rng, const ChannelSet& cs) {
    return pick(rng, min_reduced_dimension(cs.K(), cs.L()), max_reduced_dimension(cs.K(), cs.M()));
}

bool chain_rule(RngStream& rng) {
    const ChannelSet cs = random_network(rng);
    const FilterBank fb = tklt_bank(cs, random_dim(rng, cs));
    const double total = joint_mi(cs, fb);
    const int l = pick(rng, 0, cs.L() - 1);
    CMat S = CMat::Zero(cs.K(), cs.K());
    for (int i = 0; i < cs.L(); ++i)
        if (i != l) {
            const CMat G = fb.W[i].adjoint() * cs.H[i];
            S += G.adjoint() * G;
        }
    const double split = log2det_eye_plus(cs.rho * S) + conditional_mi(l, cs, fb);
    return std::abs(split - total) <= 1e-9 * std::max(1.0, std::abs(total));
}

bool poincare(RngStream& rng) {
    const int K = pick(rng, 1, 8), M = pick(rng, 1, 8);
    const CMat H = gaussian(rng, M, K);
    const int N = pick(rng, 1, std::min(M, K));
    const double rho = std::pow(10.0, 3.0 * rng.uniform() - 0.5);
    const double best = local_mi(H, tklt(H, N), rho);
    const CMat Q = orthonormalize(gaussian(rng, M, N));
    return local_mi(H, Q, rho) <= best + 1e-9;
}

bool eig_reconstruction(RngStream& rng) {
    const int n = pick(rng, 1, 10);
    const CMat X = gaussian(rng, n, n);
    const CMat A = X * X.adjoint();
    const HermitianEig e = hermitian_eig(A);
    const CMat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    const bool sorted = std::is_sorted(e.values.data(), e.values.data() + n, std::greater<>());
    return sorted && (back - A).norm() <= 1e-10 * std::max(1.0, A.norm());
}

bool bca_monotone(RngStream& rng) {
    const ChannelSet cs = random_network(rng);
    return tcklt_bca(cs, random_dim(rng, cs), {5, 0.0}).monotone;
}

bool uqn_residual(RngStream& rng) {
    const int n = pick(rng, 1, 8);
    RVec s(n);
    for (int i = 0; i < n; ++i) s(i) = 1.0 + std::pow(10.0, 4.0 * rng.uniform());
    const double R = 0.5 + 60.0 * rng.uniform();
    return std::abs(uqn_rate(s, solve_uqn_delta(s, R)) - R) <= 1e-9;
}

bool lloyd_max_reference(RngStream&) {
    const LloydMaxCodebook cb = lloyd_max_codebook(1, 1.0);
    const double level = std::sqrt(2.0 / std::numbers::pi);
    return std::abs(cb.mse - (1.0 - 2.0 / std::numbers::pi)) <= 1e-6 && std::abs(cb.levels.back() - level) <= 1e-6;
}

}  // namespace

SelftestSummary run_selftest(std::ostream& os, int instances, std::uint64_t seed) {
    struct Suite {
        const char* name;
        std::function<bool(RngStream&)> check;
        int repeats;
    };
    const Suite suites[] = {
        {"hermitian eigendecomposition", eig_reconstruction, instances},
        {"chain rule for joint information", chain_rule, instances},
        {"T-KLT beats random orthonormal filters", poincare, instances},
        {"BCA objective non-decreasing", bca_monotone, instances},
        {"UQN delta residual <= 1e-9", uqn_residual, instances},
        {"Lloyd-Max 1-bit reference", lloyd_max_reference, 1},
    };
    SelftestSummary sum;
    std::uint64_t tag = 0;
    for (const Suite& s : suites) {
        RngStream rng(seed, ++tag, StreamTag::Test);
        int bad = 0;
        for (int i = 0; i < s.repeats; ++i) {
            bool ok = false;
            try {
                ok = s.check(rng);
            } catch (const std::exception&) {
                ok = false;
            }
            bad += ok ? 0 : 1;
        }
        os << (bad == 0 ? "PASS " : "FAIL ") << s.name << " (" << s.repeats - bad << "/" << s.repeats << ")\n";
        (bad == 0 ? sum.passed : sum.failed) += 1;
    }
    os << "selftest: " << sum.passed << " passed, " << sum.failed << " failed\n";
    return sum;
}

}  // namespace fhdr
