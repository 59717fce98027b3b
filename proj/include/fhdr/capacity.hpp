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

#include <string>
#include <vector>

#include "fhdr/compression.hpp"
#include "fhdr/dimred.hpp"

namespace fhdr {

// Result of a high-SNR / fronthaul-limited approximation. Rank-deficient
// inputs give value = -inf and a diagnostic instead of throwing, since rate
// sweeps legitimately pass through such points at small N.
struct ApproxValue {
    double value = 0.0;
    std::string diagnostic;

    bool valid() const;
};

/// log2 det(I_K + rho sum_l G_l^H G_l / (1 + delta_l)). delta_l = +inf drops
/// receiver l; delta_l = 0 means unquantised.
double sum_capacity_sic(const ReducedChannelSet& rcs, const RVec& delta);

/// R K / N + log2 det(sum_l G_l^H G_l / gamma_bar_l).
ApproxValue fronthaul_limited_approx(const ReducedChannelSet& rcs, double R);

/// LMMSE detection matrices B_l (K x N) such that x_hat = sum_l B_l z~_l.
std::vector<CMat> lmmse_detectors(const ReducedChannelSet& rcs, const RVec& delta);

struct UserCapacities {
    RVec sqinr;
    RVec capacity;  // log2(1 + sqinr)
};

UserCapacities user_capacities_lmmse(const ReducedChannelSet& rcs, const RVec& delta);

/// min(L R, I(y; x)).
double cutset_bound(double R, int L, const ChannelSet& cs);

/// log2 det(I_K + rho sum_l G_l^H (I + Phi_l)^{-1} G_l): the imperfect-CSI
/// lower bound for one realisation (expectation is the caller's job).
double sum_capacity_imperfect(const std::vector<CMat>& G_hat, const std::vector<CMat>& Phi, double rho);

/// Same bound using each plan's erasure-aware (I + Phi_l)^{-1}.
double sum_capacity_imperfect(const std::vector<CMat>& G_hat, const CompressionPlan& plan, double rho);

/// LMMSE user capacities -log2([A^{-1}]_kk) with
/// A = I_K + rho sum_l G_l^H (I + Phi_l)^{-1} G_l, treating estimation error
/// as noise.
UserCapacities user_capacities_imperfect(const std::vector<CMat>& G_hat, const CompressionPlan& plan, double rho);

/// C_k ~ R/N - log2([(sum_l G_l^H G_l / gamma_bar_l)^{-1}]_{kk}).
std::vector<ApproxValue> lmmse_user_rate_approx(const ReducedChannelSet& rcs, double R);

struct CapacityReport {
    double sum_capacity_sic = 0.0;
    RVec user_capacities;
    RVec sqinr;
    double approx_sum = 0.0;  // fronthaul-limited approximation, may be -inf
    double cutset = 0.0;
    double full_mi = 0.0;
    double joint_mi_reduced = 0.0;
    RVec deltas;
};

/// Reduce, plan UQN compression at per-receiver rate R and evaluate all
/// capacity measures for one realisation.
CapacityReport evaluate_capacity(const ChannelSet& cs, const FilterBank& fb, double R);

}  // namespace fhdr
