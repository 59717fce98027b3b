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

#include "fhdr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fhdr {

void ScenarioConfig::validate() const {
    if (K < 1 || L < 1 || M < 1) throw InvalidInput("scenario: K, L and M must all be >= 1");
    if (!(area_side > 0.0)) throw InvalidInput("scenario: area_side must be positive");
    if (!std::isfinite(user_height) || !std::isfinite(rx_height))
        throw InvalidInput("scenario: heights must be finite");
    if (!(pathloss_exponent > 0.0)) throw InvalidInput("scenario: pathloss_exponent must be positive");
    if (!(shadow_sigma_db >= 0.0)) throw InvalidInput("scenario: shadow_sigma_db must be >= 0");
    if (!std::isfinite(rho_db)) throw InvalidInput("scenario: rho_db must be finite");
}

double ScenarioConfig::rho() const { return db_to_linear(rho_db); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double pathloss_db(double distance_m, const ScenarioConfig& cfg) {
    const double d = std::max(distance_m, kReferenceDistance);
    return -10.0 * cfg.pathloss_exponent * std::log10(d / kReferenceDistance);
}

RVec power_control(const RMat& beta) {
    const double L = static_cast<double>(beta.rows());
    RVec p(beta.cols());
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
        const double total = beta.col(k).sum();
        if (!(total > 0.0)) throw InvalidInput("power_control: user " + std::to_string(k) + " has zero total gain");
        p(k) = L / total;
    }
    return p;
}

Scenario scenario_from_gains(const RMat& beta) {
    if ((beta.array() <= 0.0).any()) throw InvalidInput("scenario_from_gains: gains must be positive");
    Scenario sc;
    sc.beta = beta;
    sc.p = power_control(beta);
    sc.user_positions.resize(beta.cols());
    sc.rx_positions.resize(beta.rows());
    return sc;
}

Scenario generate_scenario(const ScenarioConfig& cfg, RngStream& rng) {
    cfg.validate();
    Scenario sc;
    sc.user_positions.resize(cfg.K);
    sc.rx_positions.resize(cfg.L);
    for (auto& u : sc.user_positions) {
        u.x = cfg.area_side * rng.uniform();
        u.y = cfg.area_side * rng.uniform();
        u.z = cfg.user_height;
    }
    for (auto& r : sc.rx_positions) {
        r.x = cfg.area_side * rng.uniform();
        r.y = cfg.area_side * rng.uniform();
        r.z = cfg.rx_height;
    }

    sc.beta.resize(cfg.L, cfg.K);
    for (int l = 0; l < cfg.L; ++l) {
        for (int k = 0; k < cfg.K; ++k) {
            const auto& a = sc.rx_positions[l];
            const auto& b = sc.user_positions[k];
            const double d = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
            const double shadow_db = cfg.shadow_sigma_db * rng.normal();
            sc.beta(l, k) = db_to_linear(pathloss_db(d, cfg) + shadow_db);
        }
    }
    sc.p = power_control(sc.beta);
    return sc;
}

ChannelSet draw_channels(const Scenario& sc, const ScenarioConfig& cfg, RngStream& rng) {
    const auto L = sc.beta.rows(), K = sc.beta.cols();
    ChannelSet cs;
    cs.rho = cfg.rho();
    cs.H.reserve(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        CMat H(cfg.M, K);
        for (Eigen::Index k = 0; k < K; ++k) {
            const double scale = std::sqrt(sc.p(k));
            for (int m = 0; m < cfg.M; ++m) H(m, k) = scale * rng.complex_normal(sc.beta(l, k));
        }
        cs.H.push_back(std::move(H));
    }
    return cs;
}

EstimatedChannelSet estimate_channels(const ChannelSet& cs, const Scenario& sc, double rho_pl, RngStream& rng,
                                      PilotModel model) {
    if (!(rho_pl > 0.0)) throw InvalidInput("estimate_channels: rho_pl must be positive");
    const int L = cs.L(), M = cs.M(), K = cs.K();
    EstimatedChannelSet est;
    est.rho_pl = rho_pl;
    est.rho = cs.rho;
    est.H_true = cs.H;
    est.H_hat.reserve(L);
    est.C.reserve(L);
    const bool perfect = std::isinf(rho_pl);
    const bool pc = model == PilotModel::PowerControlled;
    const double sq = std::sqrt(rho_pl);

    for (int l = 0; l < L; ++l) {
        CMat Hh(M, K);
        double c_total = 0.0;
        for (int k = 0; k < K; ++k) {
            const double sp = std::sqrt(sc.p(k));
            // prior variance of the entries being estimated
            const double var = pc ? sc.p(k) * sc.beta(l, k) : sc.beta(l, k);
            const double gain = perfect ? 0.0 : sq * var / (1.0 + rho_pl * var);
            for (int m = 0; m < M; ++m) {
                // pilot noise is always drawn so streams stay aligned across rho_pl
                const cplx noise = rng.complex_normal(1.0);
                if (perfect) {
                    Hh(m, k) = cs.H[l](m, k);
                } else if (pc) {
                    Hh(m, k) = gain * (sq * cs.H[l](m, k) + noise);
                } else {
                    Hh(m, k) = sp * gain * (sq * cs.H[l](m, k) / sp + noise);
                }
            }
            if (!perfect) c_total += (pc ? 1.0 : sc.p(k)) * var / (1.0 + rho_pl * var);
        }
        est.H_hat.push_back(std::move(Hh));
        est.C.push_back(c_total * RMat::Identity(M, M));
    }
    return est;
}

}  // namespace fhdr
