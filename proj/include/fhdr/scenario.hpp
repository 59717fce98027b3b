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

#include <cstdint>
#include <vector>

#include "fhdr/numerics.hpp"
#include "fhdr/rng.hpp"

namespace fhdr {

// Dense single-cell deployment: users and receivers dropped uniformly in a
// square, log-distance path loss with log-normal shadowing, Rayleigh fading.
struct ScenarioConfig {
    int K = 8;  // users
    int L = 4;  // receivers
    int M = 8;  // antennas per receiver
    double area_side = 200.0;  // m
    double user_height = 1.0;  // m
    double rx_height = 6.0;    // m
    double pathloss_exponent = 2.9;
    double shadow_sigma_db = 5.7;
    double rho_db = 15.0;
    std::uint64_t seed = 1;

    // Throws InvalidInput on a bad configuration.
    void validate() const;
    // M * L >= K; the schemes here assume an excess of receive antennas.
    bool antenna_excess() const { return M * L >= K; }
    double rho() const;
};

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct Scenario {
    std::vector<Point3> user_positions;
    std::vector<Point3> rx_positions;
    RMat beta;  // L x K large-scale gains (linear)
    RVec p;     // K power-control coefficients
};

// Channels for one fading realisation, power control already applied:
// column k of H[l] is sqrt(p_k) h_{l,k}.
struct ChannelSet {
    std::vector<CMat> H;
    double rho = 1.0;

    int L() const { return static_cast<int>(H.size()); }
    int M() const { return H.empty() ? 0 : static_cast<int>(H.front().rows()); }
    int K() const { return H.empty() ? 0 : static_cast<int>(H.front().cols()); }
};

// Pilot-based MMSE estimates. C[l] is the aggregate error covariance
// sum_k C_{l,k}; the true channels are kept for genie evaluation.
struct EstimatedChannelSet {
    std::vector<CMat> H_hat;
    std::vector<RMat> C;
    double rho_pl = 0.0;
    double rho = 1.0;
    std::vector<CMat> H_true;
};

inline constexpr double kReferenceDistance = 1.0;  // m

double db_to_linear(double db);

/// Path loss in dB (negative), without shadowing. Distances below the
/// reference distance are clamped to it.
double pathloss_db(double distance_m, const ScenarioConfig& cfg);

/// p_k = L / sum_l beta_{l,k}, so every user has unit network-average
/// received power.
RVec power_control(const RMat& beta);

/// Scenario with the given gains and no geometry; used for fixed setups.
Scenario scenario_from_gains(const RMat& beta);

Scenario generate_scenario(const ScenarioConfig& cfg, RngStream& rng);

ChannelSet draw_channels(const Scenario& sc, const ScenarioConfig& cfg, RngStream& rng);

// How the pilot SNR relates to the large-scale gains.
//   PowerControlled: pilots are sent with the data power control, so the
//     pilot observation of antenna m, user k is sqrt(rho_pl) sqrt(p_k) g + n
//     and the effective prior variance is p_k beta_{l,k}, on the same scale
//     as the data SNR rho.
//   Raw: sqrt(rho_pl) g + n with prior variance beta_{l,k}, the estimate
//     then scaled by sqrt(p_k).
enum class PilotModel { PowerControlled, Raw };

/// Per-antenna scalar MMSE estimate from orthogonal pilots at SNR rho_pl.
/// rho_pl = +inf gives perfect estimates with zero error covariance.
EstimatedChannelSet estimate_channels(const ChannelSet& cs, const Scenario& sc, double rho_pl, RngStream& rng,
                                      PilotModel model = PilotModel::PowerControlled);

}  // namespace fhdr
