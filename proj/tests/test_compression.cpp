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

#include "fhdr/compression.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fhdr;

namespace {

RVec vec(std::initializer_list<double> v) {
    RVec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

std::vector<double> stdvec(const RVec& v) { return {v.data(), v.data() + v.size()}; }

ReducedChannelSet random_reduced(int K, int L, int N, double rho, RngStream& rng) {
    std::vector<CMat> H;
    for (int l = 0; l < L; ++l) H.push_back(testgen::gaussian(N, K, rng, testgen::log_uniform(rng, 0.1, 10.0)));
    FilterBank fb;
    fb.N = N;
    fb.W.assign(L, CMat::Identity(N, N));
    return reduce_channels(H, fb, rho);
}

}  // namespace

TEST_CASE("UQN delta: examples") {
    CHECK(solve_uqn_delta(vec({1.0}), 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(solve_uqn_delta(vec({16.0}), 4.0) == doctest::Approx(16.0 / 15.0).epsilon(1e-8));

    // zero reduced channel: every component variance is 1
    std::vector<CMat> H{CMat::Zero(1, 1)};
    FilterBank fb;
    fb.N = 1;
    fb.W = {CMat::Identity(1, 1)};
    CHECK(solve_uqn_delta(reduce_channels(H, fb, 10.0), 0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));

    const RVec s = vec({1001.0, 2001.0});
    const double d = solve_uqn_delta(s, 20.0);
    const double approx = std::sqrt(1000.0 * 2000.0) * std::exp2(-20.0 / 2.0);
    CHECK(std::abs(d / approx - 1.0) < 0.05);

    CHECK_THROWS_AS(solve_uqn_delta(s, 0.0), InvalidInput);
    CHECK_THROWS_AS(solve_uqn_delta(vec({-1.0}), 1.0), InvalidInput);
}

TEST_CASE("UQN delta: residual, oracle agreement and monotonicity") {
    RngStream rng(61);
    for (int t = 0; t < 1000; ++t) {
        const int N = testgen::uniform_int(rng, 1, 8);
        const RVec s = (testgen::positive(N, rng, 1e-3, 1e6).array() + 1.0).matrix();
        const double R = testgen::log_uniform(rng, 0.05, 80.0);
        const double d = solve_uqn_delta(s, R);
        CHECK(d > 0.0);
        CHECK(std::abs(uqn_rate(s, d) - R) <= 1e-9);
        CHECK(d == doctest::Approx(oracle::uqn_delta(stdvec(s), R)).epsilon(1e-7));
        const RVec r = exact_rate_allocation(s, d);
        CHECK(std::abs(r.sum() - R) <= 1e-9);
        CHECK(r.minCoeff() >= 0.0);

        CHECK(solve_uqn_delta(s, R * 1.1) < d);
        RVec s2 = s;
        s2(testgen::uniform_int(rng, 0, N - 1)) *= 1.5;
        CHECK(solve_uqn_delta(s2, R) > d);
    }
}

TEST_CASE("exact rate allocation: examples") {
    const RVec s = vec({16.0, 4.0});
    const double d = solve_uqn_delta(s, 6.0);
    const RVec r = exact_rate_allocation(s, d);
    CHECK(std::abs(r.sum() - 6.0) <= 1e-9);
    CHECK(r(0) > r(1));

    const RVec eq = exact_rate_allocation(vec({5.0, 5.0, 5.0}), solve_uqn_delta(vec({5.0, 5.0, 5.0}), 9.0));
    CHECK((eq.array() - 3.0).abs().maxCoeff() < 1e-9);

    CHECK(exact_rate_allocation(s, 1e300).maxCoeff() < 1e-250);
}

TEST_CASE("approximate rate allocation: examples") {
    const auto eq = approx_rate_allocation(vec({2.0, 2.0}), 6.0);
    CHECK(std::abs(eq.rates(0) - 3.0) < 1e-12);
    CHECK(std::abs(eq.rates(1) - 3.0) < 1e-12);

    const auto a = approx_rate_allocation(vec({4.0, 1.0}), 4.0);
    CHECK(std::abs(a.rates(0) - 3.0) < 1e-12);
    CHECK(std::abs(a.rates(1) - 1.0) < 1e-12);
    CHECK_FALSE(a.clamped);

    const auto c = approx_rate_allocation(vec({100.0, 1e-4}), 2.0);
    CHECK(c.clamped);
    CHECK(std::abs(c.rates(0) - 2.0) < 1e-12);
    CHECK(c.rates(1) == 0.0);
}

TEST_CASE("approximate rate allocation: properties") {
    RngStream rng(62);
    for (int t = 0; t < 1000; ++t) {
        const int N = testgen::uniform_int(rng, 1, 8);
        const RVec g = testgen::positive(N, rng, 1e-4, 1e4);
        const double R = testgen::log_uniform(rng, 0.1, 60.0);
        const auto a = approx_rate_allocation(g, R);
        CHECK(a.rates.minCoeff() >= 0.0);
        CHECK(a.rates.sum() <= R + 1e-9);
        if (!a.clamped) CHECK(std::abs(a.rates.sum() - R) <= 1e-9);
    }
}

TEST_CASE("exact and approximate allocations agree in the high-resolution regime") {
    // The closed form drops 1 and delta against rho gamma_i, so agreement
    // needs delta << rho gamma_min. Under only min rho gamma > 100 and
    // 2^{R/N} > 100, a wide eigenvalue spread can still leave delta close to
    // rho gamma_min; those instances are counted and reported.
    RngStream rng(63);
    const double rho = 1e3;
    int premise = 0, literal_only = 0;
    double worst_literal = 0.0;
    for (int t = 0; t < 2000; ++t) {
        const int N = testgen::uniform_int(rng, 1, 6);
        const RVec g = testgen::positive(N, rng, 0.2, 50.0);  // rho gamma > 100
        const double R = N * testgen::log_uniform(rng, 6.7, 30.0);  // 2^{R/N} > 100
        const RVec s = (rho * g.array() + 1.0).matrix();
        const double delta = solve_uqn_delta(s, R);
        const double dev = (exact_rate_allocation(s, delta) - approx_rate_allocation(g, R).rates).cwiseAbs().maxCoeff();
        if (delta <= 0.01 * rho * g.minCoeff()) {
            ++premise;
            CHECK(dev < 0.05);
        } else {
            ++literal_only;
            worst_literal = std::max(worst_literal, dev);
        }
    }
    MESSAGE("delta << rho gamma_min: " << premise << " instances; literal conditions only: " << literal_only
                                       << ", worst deviation " << worst_literal << " bpcu");
    CHECK(premise > 500);
}

TEST_CASE("quantizer noise variance") {
    CHECK(quantizer_noise_variance(3.0, 1.0) == doctest::Approx(3.0));
    CHECK(quantizer_noise_variance(3.0, 2.0) == doctest::Approx(1.0));
    CHECK(std::isinf(quantizer_noise_variance(3.0, 0.0)));
    CHECK(quantizer_noise_variance(3.0, 1e6) == 0.0);
}

TEST_CASE("UQN plans") {
    RngStream rng(64);
    for (int t = 0; t < 200; ++t) {
        const int K = testgen::uniform_int(rng, 1, 6), L = testgen::uniform_int(rng, 1, 4);
        const int N = testgen::uniform_int(rng, 1, std::min(K, 6));
        const auto rcs = random_reduced(K, L, N, testgen::log_uniform(rng, 0.1, 1e4), rng);
        const double R = testgen::log_uniform(rng, 0.5, 40.0);
        const auto plan = plan_uqn(rcs, R);
        for (int l = 0; l < L; ++l) {
            const auto& rp = plan.receivers[l];
            CHECK(std::abs(rp.rates.sum() - R) <= 1e-9);
            CHECK(std::abs(uqn_rate(rp.sigma2, rp.delta) - R) <= 1e-9);
            CHECK((rp.noise_var.array() - rp.delta).abs().maxCoeff() <= 1e-6 * rp.delta);
            const CMat phi = rp.phi();
            CHECK((phi - rp.delta * CMat::Identity(N, N)).norm() <= 1e-6 * rp.delta * N);
            CHECK((rp.V.adjoint() * rp.V - CMat::Identity(N, N)).norm() < 1e-10);
            CHECK_FALSE(rp.has_erasures());
        }
        CHECK((plan.deltas().array() > 0.0).all());
    }
}

TEST_CASE("forward test channel: infinite rate is transparent") {
    RngStream rng(65);
    const auto rcs = random_reduced(3, 2, 3, 10.0, rng);
    CompressionPlan plan = plan_uqn(rcs, 10.0);
    for (auto& rp : plan.receivers) {
        rp.rates.setConstant(1e6);
        for (int i = 0; i < rp.rates.size(); ++i) rp.noise_var(i) = quantizer_noise_variance(rp.sigma2(i), 1e6);
    }
    const CVec z = testgen::gaussian(3, 1, rng);
    CHECK((quantize_gaussian_model(z, plan, 0, rng) - z).norm() < 1e-9);
}

TEST_CASE("forward test channel: Monte-Carlo noise statistics") {
    RngStream rng(66);
    const auto rcs = random_reduced(3, 1, 3, 100.0, rng);
    const auto plan = plan_uqn(rcs, 6.0);
    const auto& rp = plan.receivers[0];
    const CVec z = CVec::Zero(3);
    const int draws = 100000;
    RVec var = RVec::Zero(3);
    CMat cov = CMat::Zero(3, 3);
    RMat off2 = RMat::Zero(3, 3);
    for (int t = 0; t < draws; ++t) {
        const CVec e = quantize_gaussian_model(z, plan, 0, rng);
        const CVec c = rp.V.adjoint() * e;
        var += c.cwiseAbs2();
        const CMat o = e * e.adjoint();
        cov += o;
        off2 += o.cwiseAbs2();
    }
    var /= draws;
    cov /= static_cast<double>(draws);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(var(i) / rp.noise_var(i) - 1.0) < 0.02);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(cov(i, i).real() / rp.delta - 1.0) < 0.02);
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double se = std::sqrt(off2(i, j) / draws - std::norm(cov(i, j))) / std::sqrt(draws);
            CHECK(std::abs(cov(i, j)) < 3.0 * std::sqrt(2.0) * se);
        }
    }
}

TEST_CASE("erasures") {
    RngStream rng(67);
    const auto rcs = random_reduced(2, 1, 2, 10.0, rng);
    CompressionPlan plan = plan_uqn(rcs, 4.0);
    auto& rp = plan.receivers[0];
    rp.rates(1) = 0.0;
    rp.noise_var(1) = quantizer_noise_variance(rp.sigma2(1), 0.0);
    CHECK(rp.has_erasures());
    CHECK(all_finite(rp.phi()));
    const CVec z = testgen::gaussian(2, 1, rng);
    const CVec zq = quantize_gaussian_model(z, plan, 0, rng);
    CHECK(std::abs((rp.V.adjoint() * zq)(1)) < 1e-12);
    // erased direction maps to zero in (I + Phi)^{-1}
    CHECK((rp.inv_one_plus_phi() * rp.V.col(1)).norm() < 1e-12);
}

TEST_CASE("imperfect quantisation covariance") {
    RngStream rng(68);
    const auto rcs = random_reduced(4, 1, 3, 100.0, rng);
    const auto plan = plan_uqn(rcs, 9.0);
    const auto& rp = plan.receivers[0];
    CHECK((imperfect_quant_covariance(rp.V, rp.rates, rp.sigma2) - rp.delta * CMat::Identity(3, 3)).norm() <
          1e-6 * rp.delta);

    const CMat V = testgen::orthonormal(3, 3, rng);
    const CMat phi = imperfect_quant_covariance(V, RVec::Constant(3, 2.0), RVec::Constant(3, 6.0));
    CHECK((phi - 2.0 * CMat::Identity(3, 3)).norm() < 1e-12);

    for (int t = 0; t < 1000; ++t) {
        const int N = testgen::uniform_int(rng, 1, 6);
        const CMat U = testgen::orthonormal(N, N, rng);
        RVec r = testgen::positive(N, rng, 0.01, 20.0);
        if (rng.uniform() < 0.3) r(0) = 0.0;
        const CMat P = imperfect_quant_covariance(U, r, testgen::positive(N, rng, 1.0, 1e4));
        CHECK((P - P.adjoint()).norm() < 1e-9 * std::max(1.0, P.norm()));
        CHECK(hermitian_eig(P).values.minCoeff() >= -1e-9 * std::max(1.0, P.norm()));
    }
    CHECK_THROWS_AS(imperfect_quant_covariance(V, RVec::Ones(2), RVec::Ones(3)), InvalidInput);
}

TEST_CASE("Lloyd-Max: one bit") {
    const auto cb = lloyd_max_codebook(1, 1.0);
    REQUIRE(cb.levels.size() == 2);
    CHECK(std::abs(cb.levels[1] - std::sqrt(2.0 / M_PI)) < 1e-9);
    CHECK(std::abs(cb.levels[0] + std::sqrt(2.0 / M_PI)) < 1e-9);
    CHECK(std::abs(cb.mse - (1.0 - 2.0 / M_PI)) < 1e-6);
    CHECK(std::abs(cb.thresholds[0]) < 1e-12);
    CHECK(cb.quantize(0.3) == doctest::Approx(cb.levels[1]));
    CHECK(cb.quantize(-5.0) == doctest::Approx(cb.levels[0]));
}

TEST_CASE("Lloyd-Max: matches a quadrature Lloyd oracle") {
    for (int bits : {2, 3}) {
        const auto cb = lloyd_max_codebook(bits, 1.0);
        const auto ref = oracle::lloyd(bits);
        CHECK(cb.mse == doctest::Approx(ref.mse).epsilon(1e-5));
        for (std::size_t i = 0; i < ref.levels.size(); ++i) CHECK(std::abs(cb.levels[i] - ref.levels[i]) < 1e-4);
        CHECK(oracle::quantizer_mse(cb.levels) == doctest::Approx(cb.mse).epsilon(1e-6));
    }
    CHECK(std::abs(lloyd_max_codebook(2, 1.0).mse - 0.1175) < 5e-4);
}

TEST_CASE("Lloyd-Max: scaling, distortion-rate bound, sampled MSE") {
    RngStream rng(69);
    for (int bits = 1; bits <= 6; ++bits) {
        for (double var : {0.25, 1.0, 7.0}) {
            const auto cb = lloyd_max_codebook(bits, var);
            CHECK(cb.mse >= gaussian_distortion_rate(var, bits));
            CHECK(cb.mse == doctest::Approx(var * lloyd_max_codebook(bits, 1.0).mse).epsilon(1e-9));
            CHECK(static_cast<int>(cb.levels.size()) == (1 << bits));
        }
        const auto cb = lloyd_max_codebook(bits, 1.0);
        double mse = 0.0;
        const int draws = 100000;
        for (int t = 0; t < draws; ++t) {
            const double x = rng.normal();
            mse += (x - cb.quantize(x)) * (x - cb.quantize(x));
        }
        CHECK(std::abs(mse / draws / cb.mse - 1.0) < 0.03);
    }
    CHECK_THROWS_AS(lloyd_max_codebook(0, 1.0), InvalidInput);
    CHECK_THROWS_AS(lloyd_max_codebook(2, 0.0), InvalidInput);
}
