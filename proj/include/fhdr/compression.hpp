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

#include "fhdr/dimred.hpp"
#include "fhdr/numerics.hpp"
#include "fhdr/rng.hpp"

namespace fhdr {

// Transform coding at one receiver: decorrelate with V (z -> V^H z), then
// compress component i through a Gaussian test channel at rate rates(i).
// A component with zero rate is erased (replaced by its mean, zero); its
// noise_var entry is +inf.
struct ReceiverPlan {
    double delta = 0.0;  // uniform quantisation noise level (exact UQN plans)
    CMat V;              // N x N unitary
    RVec sigma2;         // variances of the decorrelated components
    RVec rates;          // bpcu per component, >= 0
    RVec noise_var;      // sigma2 / (2^rate - 1), +inf where erased

    bool has_erasures() const;
    /// Phi = V diag(noise_var) V^H over the non-erased components.
    CMat phi() const;
    /// (I + Phi)^{-1} with erased directions mapped to zero.
    CMat inv_one_plus_phi() const;
};

struct CompressionPlan {
    double R = 0.0;  // fronthaul rate per receiver, bpcu
    std::vector<ReceiverPlan> receivers;

    RVec deltas() const;
};

/// sum_i log2(1 + sigma2_i / delta).
double uqn_rate(const RVec& sigma2, double delta);

/// Solve R = sum_i log2(1 + sigma2_i / delta) for delta.
double solve_uqn_delta(const RVec& sigma2, double R);
/// Same, with sigma2 = rho gamma_{l,i} + 1 taken from the reduced channel.
double solve_uqn_delta(const ReducedChannelSet& rcs, int l, double R);

/// rho gamma_{l,i} + 1.
RVec component_variances(const ReducedChannelSet& rcs, int l);

/// Test-channel noise variance sigma2 / (2^rate - 1); +inf for rate <= 0.
double quantizer_noise_variance(double sigma2, double rate);

/// r_i = log2(1 + sigma2_i / delta).
RVec exact_rate_allocation(const RVec& sigma2, double delta);

struct ApproxAllocation {
    RVec rates;
    bool clamped = false;
};

/// r_i = R/N + log2(gamma_i) - mean_j log2(gamma_j), with negative rates
/// clamped to zero and the rest re-allocated over the remaining components.
/// Non-positive gammas are given zero rate.
ApproxAllocation approx_rate_allocation(const RVec& gammas, double R);

/// Exact UQN plan for every receiver of a perfectly known reduced channel.
CompressionPlan plan_uqn(const ReducedChannelSet& rcs, double R);

/// Forward test channel: z~ = V (V^H z + delta), delta_i ~ CN(0, noise_var_i),
/// erased components set to zero.
CVec quantize_gaussian_model(const CVec& z, const CompressionPlan& plan, int l, RngStream& rng);

/// Phi = V diag(sigma2_i / (2^{r_i} - 1)) V^H. Zero-rate components contribute
/// nothing here; use ReceiverPlan for erasure-aware capacity evaluation.
CMat imperfect_quant_covariance(const CMat& V, const RVec& rates, const RVec& sigma2);

// Fixed-rate minimum-MSE scalar quantiser for a zero-mean real Gaussian.
struct LloydMaxCodebook {
    int bits = 0;
    double variance = 1.0;
    std::vector<double> levels;      // ascending, 2^bits entries
    std::vector<double> thresholds;  // ascending, 2^bits - 1 decision boundaries
    double mse = 0.0;                // analytic expected distortion
    int iterations = 0;

    double quantize(double x) const;
    /// Quantise real and imaginary parts independently. The codebook should
    /// have been built for half the complex variance.
    cplx quantize(cplx z) const;
};

LloydMaxCodebook lloyd_max_codebook(int rate_bits, double variance);

/// Gaussian distortion-rate function for a real source: variance * 2^{-2r}.
double gaussian_distortion_rate(double variance, double rate_bits);

}  // namespace fhdr
