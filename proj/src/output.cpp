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

#include "fhdr/output.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#ifndef FHDR_VERSION
#define FHDR_VERSION "unknown"
#endif

namespace fhdr {

using nlohmann::json;

namespace {

json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

std::string version_string() { return FHDR_VERSION; }

json config_to_json(const ExperimentConfig& cfg) {
    const ScenarioConfig& s = cfg.scenario;
    json j;
    j["scenario"] = {{"K", s.K},
                     {"L", s.L},
                     {"M", s.M},
                     {"area_side", s.area_side},
                     {"user_height", s.user_height},
                     {"rx_height", s.rx_height},
                     {"pathloss_exponent", s.pathloss_exponent},
                     {"shadow_sigma_db", s.shadow_sigma_db},
                     {"rho_db", s.rho_db},
                     {"seed", s.seed}};
    j["rate_grid"] = cfg.rate_grid;
    if (cfg.N_policy.automatic)
        j["N_policy"] = "auto";
    else
        j["N_policy"] = cfg.N_policy.fixed;
    j["methods"] = json::array();
    for (DrMethod m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
    j["detection"] = std::string(to_string(cfg.detection));
    j["trials"] = cfg.trials;
    j["rho_pl_db"] = json::array();
    for (double v : cfg.rho_pl_db) j["rho_pl_db"].push_back(number_or_inf(v));
    j["output_path"] = cfg.output_path;
    j["j_max"] = cfg.j_max;
    j["bca_rel_tol"] = cfg.bca_rel_tol;
    j["convergence_sweeps"] = cfg.convergence_sweeps;
    j["rho_db_grid"] = cfg.rho_db_grid;
    j["allocation"] = std::string(to_string(cfg.allocation));
    j["pilot_model"] = std::string(to_string(cfg.pilot_model));
    return j;
}

json counters_to_json(const RunCounters& c) {
    return {{"evaluated_points", c.evaluated_points}, {"cutset_violations", c.cutset_violations},
            {"lmmse_violations", c.lmmse_violations}, {"max_uqn_residual", c.max_uqn_residual},
            {"approx_checked", c.approx_checked},     {"approx_within", c.approx_within},
            {"bca_updates", c.bca_updates},           {"bca_decreases", c.bca_decreases}};
}

void append_jsonl(const std::filesystem::path& path, const json& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << record.dump() << '\n';
}

json plot_descriptor(const std::string& figure, const std::string& csv_name) {
    json d{{"figure", figure}, {"data", csv_name}, {"kind", "line"}};
    auto axes = [&](const char* x, const char* xl, const char* y, const char* yl) {
        d["x"] = {{"column", x}, {"label", xl}};
        d["y"] = {{"column", y}, {"label", yl}};
    };
    if (figure == "fig3") {
        axes("sweep", "BCA sweep index", "mean_normalized_mi", "joint MI / full MI");
        d["series"] = {{"group_by", {"N"}}};
    } else if (figure == "fig4") {
        axes("rho_db", "SNR rho (dB)", "mean_fraction", "joint MI / full MI");
        d["series"] = {{"group_by", {"method", "N"}}};
    } else if (figure == "fig9") {
        axes("R", "fronthaul rate per receiver (bpcu)", "mean_user_capacity", "user capacity (bpcu)");
        d["series"] = {{"group_by", {"method", "N_used"}}};
        d["extra_series"] = json::array({{{"y", "outage5_user_capacity"}, {"style", "dashed"}}});
    } else if (figure == "fig10") {
        axes("R", "fronthaul rate per receiver (bpcu)", "mean_sum_capacity", "sum capacity (bpcu)");
        d["series"] = {{"group_by", {"method", "rho_pl_db"}}};
        d["filter"] = {{"method_suffix_excluded", {":trial_envelope", ":genie"}}};
    } else {
        axes("R", "fronthaul rate per receiver (bpcu)", "mean_sum_capacity", "sum capacity (bpcu)");
        d["series"] = {{"group_by", {"method", "N_used"}}};
        d["reference_series"] = json::array({{{"y", "cutset"}, {"label", "cut-set bound"}, {"style", "dotted"}}});
    }
    return d;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace fhdr
