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

#include "fhdr/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fhdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

CMat weighted_gram(const ReducedChannelSet& rcs, const RVec& delta) {
    if (delta.size() != rcs.L()) throw InvalidInput("per-receiver delta vector has the wrong length");
    const auto K = rcs.K();
    CMat S = CMat::Zero(K, K);
    for (int l = 0; l < rcs.L(); ++l) {
        if (std::isinf(delta(l))) continue;
        if (delta(l) < 0.0) throw InvalidInput("quantisation noise level must be >= 0");
        S.noalias() += rcs.G[l].adjoint() * rcs.G[l] / (1.0 + delta(l));
    }
    return S;
}

// sum_l G_l^H G_l / gamma_bar_l, or an error message.
std::string normalised_gram(const ReducedChannelSet& rcs, CMat& T) {
    T = CMat::Zero(rcs.K(), rcs.K());
    for (int l = 0; l < rcs.L(); ++l) {
        if (!(rcs.gamma_bar(l) > 0.0)) return "receiver " + std::to_string(l) + " has a rank-deficient reduced channel";
        T.noalias() += rcs.G[l].adjoint() * rcs.G[l] / rcs.gamma_bar(l);
    }
    const RVec ev = hermitian_eig(T).values;
    if (ev(ev.size() - 1) <= 1e-12 * ev(0)) return "global equivalent channel is rank deficient";
    return {};
}

}  // namespace

bool ApproxValue::valid() const { return std::isfinite(value); }

double sum_capacity_sic(const ReducedChannelSet& rcs, const RVec& delta) {
    return log2det_eye_plus(rcs.rho * weighted_gram(rcs, delta));
}

ApproxValue fronthaul_limited_approx(const ReducedChannelSet& rcs, double R) {
    CMat T;
    if (auto err = normalised_gram(rcs, T); !err.empty()) return {kNegInf, err};
    return {R * rcs.K() / rcs.N() + log2det_pd(T), {}};
}

std::vector<CMat> lmmse_detectors(const ReducedChannelSet& rcs, const RVec& delta) {
    const auto K = rcs.K();
    const CMat A = CMat::Identity(K, K) + rcs.rho * weighted_gram(rcs, delta);
    Eigen::LLT<CMat> llt(A);
    std::vector<CMat> B;
    for (int l = 0; l < rcs.L(); ++l) {
        if (std::isinf(delta(l))) {
            B.push_back(CMat::Zero(K, rcs.N()));
            continue;
        }
        B.push_back(rcs.rho * llt.solve(rcs.G[l].adjoint()) / (1.0 + delta(l)));
    }
    return B;
}

UserCapacities user_capacities_lmmse(const ReducedChannelSet& rcs, const RVec& delta) {
    const auto K = rcs.K();
    const CMat A = CMat::Identity(K, K) + rcs.rho * weighted_gram(rcs, delta);
    const CMat Ainv = Eigen::LLT<CMat>(A).solve(CMat::Identity(K, K));
    UserCapacities out;
    out.sqinr.resize(K);
    out.capacity.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double d = Ainv(k, k).real();
        out.sqinr(k) = std::max(1.0 / d - 1.0, 0.0);
        out.capacity(k) = std::max(-std::log2(d), 0.0);
    }
    return out;
}

double cutset_bound(double R, int L, const ChannelSet& cs) { return std::min(L * R, full_mi(cs)); }

double sum_capacity_imperfect(const std::vector<CMat>& G_hat, const std::vector<CMat>& Phi, double rho) {
    if (G_hat.size() != Phi.size() || G_hat.empty()) throw InvalidInput("sum_capacity_imperfect: size mismatch");
    const auto K = G_hat.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < G_hat.size(); ++l) {
        const auto N = G_hat[l].rows();
        Eigen::LLT<CMat> llt(CMat::Identity(N, N) + Phi[l]);
        if (llt.info() != Eigen::Success) throw InvalidInput("sum_capacity_imperfect: Phi is not PSD");
        const CMat X = llt.matrixL().solve(G_hat[l]);
        S.noalias() += X.adjoint() * X;
    }
    return log2det_eye_plus(rho * S);
}

double sum_capacity_imperfect(const std::vector<CMat>& G_hat, const CompressionPlan& plan, double rho) {
    if (G_hat.size() != plan.receivers.size() || G_hat.empty())
        throw InvalidInput("sum_capacity_imperfect: size mismatch");
    const auto K = G_hat.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < G_hat.size(); ++l)
        S.noalias() += G_hat[l].adjoint() * plan.receivers[l].inv_one_plus_phi() * G_hat[l];
    return log2det_eye_plus(rho * (S + S.adjoint()) / 2.0);
}

UserCapacities user_capacities_imperfect(const std::vector<CMat>& G_hat, const CompressionPlan& plan, double rho) {
    if (G_hat.size() != plan.receivers.size() || G_hat.empty())
        throw InvalidInput("user_capacities_imperfect: size mismatch");
    const auto K = G_hat.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < G_hat.size(); ++l)
        S.noalias() += G_hat[l].adjoint() * plan.receivers[l].inv_one_plus_phi() * G_hat[l];
    const CMat A = CMat::Identity(K, K) + rho * (S + S.adjoint()) / 2.0;
    const CMat Ainv = Eigen::LLT<CMat>(A).solve(CMat::Identity(K, K));
    UserCapacities out;
    out.sqinr.resize(K);
    out.capacity.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double d = Ainv(k, k).real();
        out.sqinr(k) = std::max(1.0 / d - 1.0, 0.0);
        out.capacity(k) = std::max(-std::log2(d), 0.0);
    }
    return out;
}

std::vector<ApproxValue> lmmse_user_rate_approx(const ReducedChannelSet& rcs, double R) {
    CMat T;
    const auto K = rcs.K();
    if (auto err = normalised_gram(rcs, T); !err.empty()) return std::vector<ApproxValue>(K, {kNegInf, err});
    const CMat Tinv = Eigen::LLT<CMat>(T).solve(CMat::Identity(K, K));
    std::vector<ApproxValue> out;
    for (Eigen::Index k = 0; k < K; ++k) out.push_back({R / rcs.N() - std::log2(Tinv(k, k).real()), {}});
    return out;
}

CapacityReport evaluate_capacity(const ChannelSet& cs, const FilterBank& fb, double R) {
    const ReducedChannelSet rcs = reduce_channels(cs, fb);
    const CompressionPlan plan = plan_uqn(rcs, R);
    CapacityReport rep;
    rep.deltas = plan.deltas();
    rep.sum_capacity_sic = sum_capacity_sic(rcs, rep.deltas);
    const UserCapacities uc = user_capacities_lmmse(rcs, rep.deltas);
    rep.user_capacities = uc.capacity;
    rep.sqinr = uc.sqinr;
    rep.approx_sum = fronthaul_limited_approx(rcs, R).value;
    rep.full_mi = full_mi(cs);
    rep.cutset = std::min(cs.L() * R, rep.full_mi);
    rep.joint_mi_reduced = joint_mi(cs, fb);
    return rep;
}

}  // namespace fhdr
