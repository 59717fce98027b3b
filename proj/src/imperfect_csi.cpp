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

#include "fhdr/imperfect_csi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fhdr {

namespace {

// f(A) for Hermitian PSD A, applied eigenvalue-wise.
template <typename F>
CMat spectral_map(const CMat& A, F f) {
    const HermitianEig e = hermitian_eig(A);
    RVec d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(e.values(i));
    return e.vectors * d.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace

WhitenedChannelSet whitening(const EstimatedChannelSet& est, double rho) {
    if (est.H_hat.size() != est.C.size()) throw InvalidInput("whitening: estimate/covariance count mismatch");
    WhitenedChannelSet w;
    w.rho = rho;
    for (std::size_t l = 0; l < est.H_hat.size(); ++l) {
        const auto M = est.H_hat[l].rows();
        if (est.C[l].rows() != M || est.C[l].cols() != M) throw InvalidInput("whitening: covariance shape mismatch");
        CMat Omega = CMat::Identity(M, M) + rho * est.C[l].cast<cplx>();
        CMat inv_sqrt = spectral_map(Omega, [](double v) { return 1.0 / std::sqrt(v); });
        w.H_check.push_back(inv_sqrt * est.H_hat[l]);
        w.Omega_inv_sqrt.push_back(std::move(inv_sqrt));
        w.Omega.push_back(std::move(Omega));
    }
    return w;
}

BcaResult design_filters_imperfect(const WhitenedChannelSet& wcs, int N, const BcaOptions& opts) {
    return tcklt_bca(wcs.as_channel_set(), N, opts);
}

ReducedChannelSet reduced_channel_imperfect(const WhitenedChannelSet& wcs, const FilterBank& fb) {
    return reduce_channels(wcs.H_check, fb, wcs.rho);
}

double mi_lower_bound(const WhitenedChannelSet& wcs, const FilterBank& fb) {
    return joint_mi(wcs.as_channel_set(), fb);
}

double mi_lower_bound_cap(const EstimatedChannelSet& est, const FilterBank& fb) {
    const auto K = est.H_hat.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < est.H_hat.size(); ++l) {
        const HermitianEig e = hermitian_eig(est.C[l].cast<cplx>());
        if (!(e.values.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
        const CMat C_inv_sqrt = spectral_map(est.C[l].cast<cplx>(), [](double v) { return 1.0 / std::sqrt(v); });
        const CMat G = fb.W[l].adjoint() * C_inv_sqrt * est.H_hat[l];
        S.noalias() += G.adjoint() * G;
    }
    return log2det_eye_plus(S);
}

CompressionPlan plan_imperfect(const ReducedChannelSet& rcs_hat, double R, RateAllocation alloc) {
    if (alloc == RateAllocation::Exact) return plan_uqn(rcs_hat, R);

    CompressionPlan plan;
    plan.R = R;
    for (int l = 0; l < rcs_hat.L(); ++l) {
        ReceiverPlan rp;
        const RVec& gammas = rcs_hat.eig[l].values;
        rp.V = rcs_hat.eig[l].vectors;
        rp.sigma2 = component_variances(rcs_hat, l);
        rp.rates = approx_rate_allocation(gammas, R).rates;
        rp.delta = rcs_hat.rho * rcs_hat.gamma_bar(l) * std::exp2(-R / rcs_hat.N());
        rp.noise_var.resize(rp.rates.size());
        for (Eigen::Index i = 0; i < rp.rates.size(); ++i) rp.noise_var(i) = quantizer_noise_variance(rp.sigma2(i), rp.rates(i));
        plan.receivers.push_back(std::move(rp));
    }
    return plan;
}

CompressionPlan with_component_variances(const CompressionPlan& plan, const std::vector<RVec>& sigma2) {
    if (sigma2.size() != plan.receivers.size()) throw InvalidInput("with_component_variances: size mismatch");
    CompressionPlan out = plan;
    for (std::size_t l = 0; l < sigma2.size(); ++l) {
        ReceiverPlan& rp = out.receivers[l];
        rp.sigma2 = sigma2[l];
        for (Eigen::Index i = 0; i < rp.rates.size(); ++i) rp.noise_var(i) = quantizer_noise_variance(rp.sigma2(i), rp.rates(i));
    }
    return out;
}

std::vector<RVec> realized_component_variances(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs,
                                               const FilterBank& fb, const CompressionPlan& plan) {
    std::vector<RVec> out;
    for (std::size_t l = 0; l < est.H_true.size(); ++l) {
        const CMat T = fb.W[l].adjoint() * wcs.Omega_inv_sqrt[l];  // N x M
        const CMat U = plan.receivers[l].V.adjoint() * T;
        const CMat A = U * est.H_true[l];
        RVec s(U.rows());
        for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = wcs.rho * A.row(i).squaredNorm() + U.row(i).squaredNorm();
        out.push_back(std::move(s));
    }
    return out;
}

CMat genie_information_matrix(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs, const FilterBank& fb,
                              const CompressionPlan& plan) {
    const auto K = est.H_true.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < est.H_true.size(); ++l) {
        const ReceiverPlan& rp = plan.receivers[l];
        std::vector<Eigen::Index> kept;
        for (Eigen::Index i = 0; i < rp.noise_var.size(); ++i)
            if (std::isfinite(rp.noise_var(i))) kept.push_back(i);
        if (kept.empty()) continue;
        CMat Vk(rp.V.rows(), static_cast<Eigen::Index>(kept.size()));
        RVec nv(static_cast<Eigen::Index>(kept.size()));
        for (std::size_t j = 0; j < kept.size(); ++j) {
            Vk.col(static_cast<Eigen::Index>(j)) = rp.V.col(kept[j]);
            nv(static_cast<Eigen::Index>(j)) = rp.noise_var(kept[j]);
        }
        const CMat T = Vk.adjoint() * fb.W[l].adjoint() * wcs.Omega_inv_sqrt[l];  // n_k x M
        const CMat G = T * est.H_true[l];
        CMat noise = T * T.adjoint();
        noise.diagonal() += nv.cast<cplx>();
        Eigen::LLT<CMat> llt((noise + noise.adjoint()) / 2.0);
        const CMat X = llt.matrixL().solve(G);
        S.noalias() += X.adjoint() * X;
    }
    S = wcs.rho * (S + S.adjoint()) / 2.0;
    return S;
}

double genie_sum_capacity(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs, const FilterBank& fb,
                          const CompressionPlan& plan) {
    return log2det_eye_plus(genie_information_matrix(est, wcs, fb, plan));
}

UserCapacities genie_user_capacities(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs,
                                     const FilterBank& fb, const CompressionPlan& plan) {
    const CMat S = genie_information_matrix(est, wcs, fb, plan);
    const auto K = S.rows();
    const CMat Ainv = Eigen::LLT<CMat>(CMat::Identity(K, K) + S).solve(CMat::Identity(K, K));
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

}  // namespace fhdr
