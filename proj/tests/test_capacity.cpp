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

#include "fhdr/capacity.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fhdr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reduced channel set whose G_l are exactly the given matrices.
ReducedChannelSet from_G(const std::vector<CMat>& G, double rho) {
    FilterBank fb;
    fb.N = static_cast<int>(G.front().rows());
    fb.W.assign(G.size(), CMat::Identity(fb.N, fb.N));
    return reduce_channels(G, fb, rho);
}

ReducedChannelSet random_rcs(int K, int L, int N, double rho, RngStream& rng) {
    std::vector<CMat> G;
    for (int l = 0; l < L; ++l) G.push_back(testgen::gaussian(N, K, rng, testgen::log_uniform(rng, 0.1, 10.0)));
    return from_G(G, rho);
}

std::vector<double> stdvec(const RVec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("SIC sum capacity: examples") {
    RngStream rng(71);
    const auto rcs = random_rcs(3, 2, 3, 10.0, rng);
    CHECK(sum_capacity_sic(rcs, RVec::Constant(2, kInf)) == 0.0);
    CHECK(sum_capacity_sic(rcs, RVec::Constant(2, 1e30)) < 1e-20);

    const int K = 4;
    const auto eye = from_G({CMat::Identity(K, K)}, 7.0);
    CHECK(sum_capacity_sic(eye, RVec::Zero(1)) == doctest::Approx(K * std::log2(8.0)));

    for (int t = 0; t < 200; ++t) {
        const auto d = testgen::dims(rng);
        const ChannelSet cs = testgen::channels(d.K, d.L, d.M, testgen::log_uniform(rng, 0.1, 1e3), rng);
        const FilterBank fb = tklt_bank(cs, d.N);
        const auto r = reduce_channels(cs, fb);
        CHECK(sum_capacity_sic(r, RVec::Zero(d.L)) == doctest::Approx(joint_mi(cs, fb)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(sum_capacity_sic(rcs, RVec::Zero(3)), InvalidInput);
}

TEST_CASE("SIC sum capacity against the stacked oracle") {
    RngStream rng(72);
    for (int t = 0; t < 300; ++t) {
        const int K = testgen::uniform_int(rng, 1, 6), L = testgen::uniform_int(rng, 1, 4);
        const int N = testgen::uniform_int(rng, 1, 5);
        const auto rcs = random_rcs(K, L, N, testgen::log_uniform(rng, 0.1, 1e4), rng);
        const RVec delta = testgen::positive(L, rng, 1e-3, 1e3);
        const CMat S = oracle::stack(rcs.G, std::vector<CMat>(L, CMat::Identity(N, N)), stdvec(delta));
        CHECK(sum_capacity_sic(rcs, delta) == doctest::Approx(oracle::stacked_mi(S, rcs.rho)).epsilon(1e-9));
    }
}

TEST_CASE("bound discipline: data processing and fronthaul cut") {
    RngStream rng(73);
    for (int t = 0; t < 1000; ++t) {
        const auto d = testgen::dims(rng);
        const ChannelSet cs = testgen::channels(d.K, d.L, d.M, testgen::log_uniform(rng, 0.1, 1e4), rng);
        const FilterBank fb = tklt_bank(cs, d.N);
        const double R = testgen::log_uniform(rng, 0.1, 60.0);
        const auto rep = evaluate_capacity(cs, fb, R);
        CHECK(rep.sum_capacity_sic <= rep.joint_mi_reduced + 1e-9);
        CHECK(rep.joint_mi_reduced <= rep.full_mi + 1e-9);
        CHECK(rep.sum_capacity_sic <= d.L * R + 1e-9);
        CHECK(rep.sum_capacity_sic <= rep.cutset + 1e-9);
        CHECK(rep.user_capacities.sum() <= rep.sum_capacity_sic + 1e-9);
        CHECK(rep.cutset == doctest::Approx(cutset_bound(R, d.L, cs)));
    }
}

TEST_CASE("fronthaul-limited approximation") {
    RngStream rng(74);
    // exactly affine with slope K/N
    for (int t = 0; t < 100; ++t) {
        const int K = testgen::uniform_int(rng, 1, 6), L = testgen::uniform_int(rng, 1, 4);
        const int N = testgen::uniform_int(rng, min_reduced_dimension(K, L), K);
        const auto rcs = random_rcs(K, L, N, 100.0, rng);
        const auto a = fronthaul_limited_approx(rcs, 10.0);
        const auto b = fronthaul_limited_approx(rcs, 10.0 + N);
        if (!a.valid()) continue;
        CHECK(b.value - a.value == doctest::Approx(static_cast<double>(K)).epsilon(1e-12));
    }

    // single receiver, unitary G, unit geometric mean
    const CMat U = testgen::orthonormal(4, 4, rng);
    const auto one = from_G({U}, 10.0);
    CHECK(one.gamma_bar(0) == doctest::Approx(1.0));
    CHECK(fronthaul_limited_approx(one, 12.0).value == doctest::Approx(12.0).epsilon(1e-12));

    // rank deficiency yields a sentinel, not an exception
    const auto thin = from_G({testgen::gaussian(1, 3, rng)}, 10.0);
    const auto bad = fronthaul_limited_approx(thin, 5.0);
    CHECK_FALSE(bad.valid());
    CHECK(bad.value == -kInf);
    CHECK_FALSE(bad.diagnostic.empty());
}

TEST_CASE("fronthaul-limited approximation tracks the exact value in its regime") {
    // Both approximations assume 1 << delta_l << rho gamma_{l,i}. Points with
    // delta > 10 and rho gamma > 100 that miss the upper separation are
    // reported separately.
    RngStream rng(75);
    int compared = 0, literal_only = 0;
    double worst_literal = 0.0;
    for (int t = 0; t < 600; ++t) {
        const int K = 4, L = 2, N = 4;
        const auto rcs = random_rcs(K, L, N, 1e9, rng);
        const double R = testgen::log_uniform(rng, 32.0, 100.0);
        const auto plan = plan_uqn(rcs, R);
        const RVec delta = plan.deltas();
        bool literal = delta.minCoeff() > 10.0, premise = true;
        for (int l = 0; l < L; ++l) {
            const double snr = rcs.rho * rcs.eig[l].values.minCoeff();
            literal = literal && snr > 100.0;
            premise = premise && delta(l) <= 0.01 * snr;
        }
        if (!literal) continue;
        const double exact = sum_capacity_sic(rcs, delta);
        const double approx = fronthaul_limited_approx(rcs, R).value;
        const auto uc = user_capacities_lmmse(rcs, delta);
        const auto ua = lmmse_user_rate_approx(rcs, R);
        double user_dev = 0.0;
        for (int k = 0; k < K; ++k) user_dev = std::max(user_dev, std::abs(uc.capacity(k) - ua[k].value));
        if (!premise) {
            ++literal_only;
            worst_literal = std::max({worst_literal, std::abs(exact - approx) / K, user_dev});
            continue;
        }
        ++compared;
        CHECK(std::abs(exact - approx) / K <= 0.5);
        CHECK(user_dev <= 0.5);
    }
    MESSAGE("in regime: " << compared << "; literal conditions only: " << literal_only << ", worst per-user gap "
                          << worst_literal << " bpcu");
    CHECK(compared > 50);
}

TEST_CASE("LMMSE detectors") {
    RngStream rng(76);
    // scalar Wiener coefficient
    const cplx g(0.3, -1.2);
    const double rho = 4.0;
    const auto s = from_G({CMat::Constant(1, 1, g)}, rho);
    const auto B = lmmse_detectors(s, RVec::Zero(1));
    CHECK(std::abs(B[0](0, 0) - rho * std::conj(g) / (1.0 + rho * std::norm(g))) < 1e-12);

    const auto small = random_rcs(3, 2, 3, 1e-12, rng);
    for (const auto& b : lmmse_detectors(small, RVec::Zero(2))) CHECK(b.norm() < 1e-10);

    // unbiased in the high-SNR full-rank limit
    const auto hi = random_rcs(4, 3, 2, 1e6, rng);
    const auto Bh = lmmse_detectors(hi, RVec::Zero(3));
    CMat sum = CMat::Zero(4, 4);
    for (int l = 0; l < 3; ++l) sum += Bh[l] * hi.G[l];
    CHECK((sum - CMat::Identity(4, 4)).norm() < 1e-3);
}

TEST_CASE("LMMSE user capacities") {
    RngStream rng(77);
    for (int t = 0; t < 1000; ++t) {
        const int K = testgen::uniform_int(rng, 1, 6), L = testgen::uniform_int(rng, 1, 4);
        const int N = testgen::uniform_int(rng, 1, 5);
        const auto rcs = random_rcs(K, L, N, testgen::log_uniform(rng, 0.1, 1e4), rng);
        const RVec delta = testgen::positive(L, rng, 1e-3, 1e3);
        const auto uc = user_capacities_lmmse(rcs, delta);
        const double sic = sum_capacity_sic(rcs, delta);
        CHECK(uc.capacity.sum() <= sic + 1e-9);
        if (K == 1) CHECK(uc.capacity(0) == doctest::Approx(sic).epsilon(1e-10));
        const CMat S = oracle::stack(rcs.G, std::vector<CMat>(L, CMat::Identity(N, N)), stdvec(delta));
        const auto sinr = oracle::lmmse_sinr(S, rcs.rho);
        for (int k = 0; k < K; ++k) {
            CHECK(uc.sqinr(k) == doctest::Approx(sinr[k]).epsilon(1e-7).scale(1.0));
            CHECK(uc.capacity(k) == doctest::Approx(std::log2(1.0 + uc.sqinr(k))).epsilon(1e-9));
        }
    }
    const auto rcs = random_rcs(3, 2, 2, 10.0, rng);
    const auto off = user_capacities_lmmse(rcs, RVec::Constant(2, kInf));
    CHECK(off.sqinr.norm() == 0.0);
    CHECK(off.capacity.norm() == 0.0);
}

TEST_CASE("LMMSE user rate approximation") {
    RngStream rng(78);
    const auto rcs = random_rcs(4, 2, 3, 100.0, rng);
    const auto a = lmmse_user_rate_approx(rcs, 9.0);
    const auto b = lmmse_user_rate_approx(rcs, 12.0);
    for (int k = 0; k < 4; ++k) CHECK(b[k].value - a[k].value == doctest::Approx(1.0).epsilon(1e-12));

    // two users on orthogonal columns of equal norm
    CMat G = CMat::Zero(2, 2);
    G(0, 0) = 2.0;
    G(1, 1) = cplx(0.0, 2.0);
    const auto sym = lmmse_user_rate_approx(from_G({G}, 10.0), 6.0);
    CHECK(sym[0].value == doctest::Approx(sym[1].value).epsilon(1e-12));

    const auto thin = lmmse_user_rate_approx(from_G({testgen::gaussian(1, 2, rng)}, 10.0), 6.0);
    CHECK_FALSE(thin[0].valid());
}

TEST_CASE("cut-set bound limits") {
    RngStream rng(79);
    ChannelSet cs = testgen::channels(3, 2, 3, 10.0, rng);
    CHECK(cutset_bound(1e9, 2, cs) == doctest::Approx(full_mi(cs)));
    cs.rho = 1e30;
    CHECK(cutset_bound(5.0, 2, cs) == doctest::Approx(10.0));
}

TEST_CASE("imperfect-CSI bound: quantisation-noise form") {
    RngStream rng(80);
    for (int t = 0; t < 200; ++t) {
        const int K = testgen::uniform_int(rng, 1, 5), L = testgen::uniform_int(rng, 1, 3);
        const int N = testgen::uniform_int(rng, 1, 4);
        const auto rcs = random_rcs(K, L, N, testgen::log_uniform(rng, 0.1, 1e3), rng);
        std::vector<CMat> zero(L, CMat::Zero(N, N)), phi, phi2;
        for (int l = 0; l < L; ++l) {
            const CMat P = testgen::psd(N, rng);
            phi.push_back(P);
            phi2.push_back(2.0 * P);
        }
        CHECK(sum_capacity_imperfect(rcs.G, zero, rcs.rho) ==
              doctest::Approx(sum_capacity_sic(rcs, RVec::Zero(L))).epsilon(1e-10));
        CHECK(sum_capacity_imperfect(rcs.G, phi2, rcs.rho) < sum_capacity_imperfect(rcs.G, phi, rcs.rho));

        const double R = testgen::log_uniform(rng, 0.5, 30.0);
        const auto plan = plan_uqn(rcs, R);
        CHECK(sum_capacity_imperfect(rcs.G, plan, rcs.rho) ==
              doctest::Approx(sum_capacity_sic(rcs, plan.deltas())).epsilon(1e-9));
        const auto ui = user_capacities_imperfect(rcs.G, plan, rcs.rho);
        const auto ul = user_capacities_lmmse(rcs, plan.deltas());
        CHECK((ui.capacity - ul.capacity).norm() < 1e-8);
    }
}
