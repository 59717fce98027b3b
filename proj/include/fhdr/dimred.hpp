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
#include <string_view>
#include <vector>

#include "fhdr/numerics.hpp"
#include "fhdr/scenario.hpp"

namespace fhdr {

enum class DrMethod { TKLT, TCKLT, AntennaSelect, AntennaReduce, None };

std::string_view to_string(DrMethod m);
/// Accepts TKLT, TCKLT, ANTENNA_SELECT, ANTENNA_REDUCE, NONE.
DrMethod parse_dr_method(std::string_view name);

// One M x N filter per receiver, each with orthonormal columns. The reduced
// signal at receiver l is z_l = W_l^H y_l.
struct FilterBank {
    std::vector<CMat> W;
    int N = 0;
    DrMethod method = DrMethod::TKLT;
};

// Smallest and largest admissible reduced dimension: ceil(K/L) .. min(M, K).
int min_reduced_dimension(int K, int L);
int max_reduced_dimension(int K, int M);
void check_reduced_dimension(int K, int L, int M, int N);

// Equivalent channels G_l = W_l^H H_l and their local eigen-structure.
struct ReducedChannelSet {
    std::vector<CMat> G;             // N x K each
    std::vector<HermitianEig> eig;   // of G_l G_l^H: gamma_{l,i} and V_l
    RVec gamma_bar;                  // per-receiver geometric mean of gamma_{l,i}
    double rho = 1.0;

    int L() const { return static_cast<int>(G.size()); }
    int N() const { return G.empty() ? 0 : static_cast<int>(G.front().rows()); }
    int K() const { return G.empty() ? 0 : static_cast<int>(G.front().cols()); }
};

ReducedChannelSet reduce_channels(const std::vector<CMat>& H, const FilterBank& fb, double rho);
ReducedChannelSet reduce_channels(const ChannelSet& cs, const FilterBank& fb);

/// Truncated KLT: the N principal eigenvectors of H H^H.
CMat tklt(const CMat& H, int N);
FilterBank tklt_bank(const ChannelSet& cs, int N);

/// log2 det(I + rho W^H H H^H W): information captured locally by W.
double local_mi(const CMat& H, const CMat& W, double rho);

/// log2 det(I_K + rho sum_l H_l^H W_l W_l^H H_l).
double joint_mi(const ChannelSet& cs, const FilterBank& fb);

/// Unreduced I(y_1..y_L; x) = log2 det(I_K + rho sum_l H_l^H H_l).
double full_mi(const ChannelSet& cs);

/// I(z_l; x | all other z_i) = log2 det(I_N + rho W_l^H H_l A_l H_l^H W_l),
/// A_l = (I_K + rho sum_{i != l} H_i^H W_i W_i^H H_i)^{-1}.
double conditional_mi(int l, const ChannelSet& cs, const FilterBank& fb);

struct BcaOptions {
    int j_max = 3;
    double rel_tol = 1e-6;  // stop early when a sweep improves joint MI by less than this (relative)
};

struct BcaResult {
    FilterBank filters;
    std::vector<double> sweep_mi;   // [0] = T-KLT initialisation, [j] after sweep j
    std::vector<double> update_mi;  // joint MI after every single-receiver update
    int sweeps = 0;
    bool monotone = true;           // no update decreased joint MI by more than 1e-9
};

/// Block coordinate ascent over receivers for the truncated conditional KLT.
/// Starts from T-KLT; each update sets W_l to the N principal eigenvectors of
/// H_l A_l H_l^H.
BcaResult tcklt_bca(const ChannelSet& cs, int N, const BcaOptions& opts = {});

struct InfoLoss {
    double loss = 0.0;   // I(y; x | z), bpcu
    double bound = 0.0;  // rho-independent upper bound (+inf when the reduced channel is rank deficient)
};

InfoLoss info_loss(const ChannelSet& cs, const FilterBank& fb);

/// Greedy joint-MI antenna selection, round-robin over receivers until each
/// has N antennas; ties go to the lowest antenna index.
FilterBank antenna_selection(const ChannelSet& cs, int N);

/// Keep the first N antennas of every receiver.
FilterBank antenna_reduce(const ChannelSet& cs, int N);

/// No reduction: W_l = I_M.
FilterBank no_reduction(const ChannelSet& cs);

/// H_l (sum_{i != l} H_i^H W_i W_i^H H_i)^{-1} H_l^H, the high-SNR limit of
/// rho H_l A_l H_l^H. Throws RankDeficient when the other receivers' reduced
/// observations span fewer than K dimensions.
CMat high_snr_update_matrix(const std::vector<CMat>& H, const FilterBank& fb, int l);

/// Dispatch on method. For DrMethod::None the N argument is ignored.
FilterBank design_filters(DrMethod method, const ChannelSet& cs, int N, const BcaOptions& opts = {});

}  // namespace fhdr
