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

#include <vector>

#include "fhdr/capacity.hpp"
#include "fhdr/compression.hpp"
#include "fhdr/dimred.hpp"
#include "fhdr/scenario.hpp"

namespace fhdr {

// Receiver-side whitening of the estimation-error-plus-noise term
// omega_l = E_l x + eta, whose covariance is Omega_l = I + rho C_l.
struct WhitenedChannelSet {
    std::vector<CMat> H_check;         // Omega_l^{-1/2} H_hat_l
    std::vector<CMat> Omega_inv_sqrt;  // Hermitian PD
    std::vector<CMat> Omega;
    double rho = 1.0;

    /// The whitened estimates as an ordinary channel set, for filter design.
    ChannelSet as_channel_set() const { return {H_check, rho}; }
};

WhitenedChannelSet whitening(const EstimatedChannelSet& est, double rho);

/// T-CKLT block coordinate ascent on the whitened estimates. The resulting
/// filters act on whitened signals: z_l = W_l^H Omega_l^{-1/2} y_l.
BcaResult design_filters_imperfect(const WhitenedChannelSet& wcs, int N, const BcaOptions& opts = {});

/// G_hat_l = W_l^H Omega_l^{-1/2} H_hat_l with eigenvalues gamma_hat and
/// eigenvectors V_hat.
ReducedChannelSet reduced_channel_imperfect(const WhitenedChannelSet& wcs, const FilterBank& fb);

/// log2 det(I_K + rho sum_l H_check_l^H W_l W_l^H H_check_l) for one realisation.
double mi_lower_bound(const WhitenedChannelSet& wcs, const FilterBank& fb);

/// rho-independent cap log2 det(I_K + sum_l H_hat_l^H C_l^{-1/2} W_l W_l^H C_l^{-1/2} H_hat_l).
/// +inf when some C_l is singular (perfect estimates).
double mi_lower_bound_cap(const EstimatedChannelSet& est, const FilterBank& fb);

enum class RateAllocation { Exact, Approx };

/// Heuristic transform-coding plan built from the estimated reduced channel.
/// Exact: uniform-noise rates solved from sigma2 = rho gamma_hat + 1.
/// Approx: closed-form allocation on gamma_hat with clamping.
/// The quantiser noise uses sigma2 = rho gamma_hat + 1 (bound mode).
CompressionPlan plan_imperfect(const ReducedChannelSet& rcs_hat, double R, RateAllocation alloc);

/// Same rates, quantiser noise recomputed for the given component variances.
CompressionPlan with_component_variances(const CompressionPlan& plan, const std::vector<RVec>& sigma2);

/// True variances [V_hat^H Cov(z_l | H) V_hat]_{ii} of the decorrelated
/// components under the realised channel, per receiver.
std::vector<RVec> realized_component_variances(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs,
                                               const FilterBank& fb, const CompressionPlan& plan);

/// Achievable sum rate with the realised (true) channel, imperfect-CSI filters
/// and plan, and Gaussian quantisation noise: genie evaluation.
double genie_sum_capacity(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs, const FilterBank& fb,
                          const CompressionPlan& plan);

/// rho sum_l G_l^H N_l^{-1} G_l for the realised channel, where N_l is the
/// covariance of the filtered noise plus quantisation noise.
CMat genie_information_matrix(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs, const FilterBank& fb,
                              const CompressionPlan& plan);

/// LMMSE user capacities under the genie evaluation.
UserCapacities genie_user_capacities(const EstimatedChannelSet& est, const WhitenedChannelSet& wcs,
                                     const FilterBank& fb, const CompressionPlan& plan);

}  // namespace fhdr
