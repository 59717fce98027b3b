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

#include "fhdr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace fhdr {

namespace {

const std::vector<std::string> kScenarioKeys{"K",         "L", "M", "area_side", "user_height", "rx_height", "pathloss_exponent",
                                            "shadow_sigma_db", "rho_db", "seed"};
const std::vector<std::string> kTopKeys{"scenario",  "rate_grid",  "N_policy",    "methods",            "detection",
                                        "trials",    "rho_pl_db",  "output_path", "j_max",              "bca_rel_tol",
                                        "convergence_sweeps",       "rho_db_grid", "allocation",
                                        "pilot_model"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

// Reads typed values and remembers where each key came from.
class Reader {
   public:
    std::map<std::string, int> lines;

    template <typename T>
    T scalar(const YAML::Node& n, const std::string& key, const char* what) {
        lines[key] = line_of(n);
        if (!n.IsScalar()) throw ConfigError(key, line_of(n), std::string("expected ") + what);
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(key, line_of(n), std::string("expected ") + what + ", got '" + n.Scalar() + "'");
        }
    }

    double real(const YAML::Node& n, const std::string& key) {
        lines[key] = line_of(n);
        if (n.IsScalar()) {
            std::string s = n.Scalar();
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
            if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        }
        return scalar<double>(n, key, "a number");
    }

    // A scalar is accepted as a one-element list.
    template <typename F>
    void each(const YAML::Node& n, const std::string& key, F f) {
        lines[key] = line_of(n);
        if (n.IsScalar()) {
            f(n);
        } else if (n.IsSequence()) {
            for (const auto& item : n) f(item);
        } else {
            throw ConfigError(key, line_of(n), "expected a list");
        }
    }
};

void read_scenario(const YAML::Node& n, ScenarioConfig& s, Reader& rd) {
    if (!n.IsMap()) throw ConfigError("scenario", line_of(n), "expected a mapping");
    rd.lines["scenario"] = line_of(n);
    for (const auto& kv : n) {
        const std::string k = kv.first.as<std::string>();
        const std::string key = "scenario." + k;
        const YAML::Node& v = kv.second;
        if (k == "K") s.K = rd.scalar<int>(v, key, "an integer");
        else if (k == "L") s.L = rd.scalar<int>(v, key, "an integer");
        else if (k == "M") s.M = rd.scalar<int>(v, key, "an integer");
        else if (k == "area_side") s.area_side = rd.real(v, key);
        else if (k == "user_height") s.user_height = rd.real(v, key);
        else if (k == "rx_height") s.rx_height = rd.real(v, key);
        else if (k == "pathloss_exponent") s.pathloss_exponent = rd.real(v, key);
        else if (k == "shadow_sigma_db") s.shadow_sigma_db = rd.real(v, key);
        else if (k == "rho_db") s.rho_db = rd.real(v, key);
        else if (k == "seed") s.seed = rd.scalar<std::uint64_t>(v, key, "a non-negative integer");
        else throw ConfigError(key, line_of(kv.first), "unknown key");
    }
}

ExperimentConfig read(const YAML::Node& root, Reader& rd) {
    ExperimentConfig cfg;
    if (!root || root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("", line_of(root), "top level must be a mapping");
    for (const auto& kv : root) {
        const std::string k = kv.first.as<std::string>();
        const YAML::Node& v = kv.second;
        if (k == "scenario") {
            read_scenario(v, cfg.scenario, rd);
        } else if (k == "rate_grid") {
            cfg.rate_grid.clear();
            rd.each(v, k, [&](const YAML::Node& x) { cfg.rate_grid.push_back(rd.real(x, k)); });
        } else if (k == "N_policy") {
            if (v.IsScalar() && v.Scalar() == "auto") {
                rd.lines[k] = line_of(v);
                cfg.N_policy = {};
            } else {
                cfg.N_policy.automatic = false;
                cfg.N_policy.fixed.clear();
                rd.each(v, k, [&](const YAML::Node& x) {
                    cfg.N_policy.fixed.push_back(rd.scalar<int>(x, k, "'auto', an integer or a list of integers"));
                });
            }
        } else if (k == "methods") {
            cfg.methods.clear();
            rd.each(v, k, [&](const YAML::Node& x) {
                const auto name = rd.scalar<std::string>(x, k, "a method name");
                try {
                    cfg.methods.push_back(parse_dr_method(name));
                } catch (const InvalidInput&) {
                    throw ConfigError(k, line_of(x),
                                      "unknown method '" + name + "' (TCKLT, TKLT, ANTENNA_SELECT, ANTENNA_REDUCE, NONE)");
                }
            });
        } else if (k == "detection") {
            const auto d = rd.scalar<std::string>(v, k, "SIC or LMMSE");
            if (d == "SIC") cfg.detection = Detection::SIC;
            else if (d == "LMMSE") cfg.detection = Detection::LMMSE;
            else throw ConfigError(k, line_of(v), "expected SIC or LMMSE, got '" + d + "'");
        } else if (k == "trials") {
            cfg.trials = rd.scalar<int>(v, k, "an integer");
        } else if (k == "rho_pl_db") {
            cfg.rho_pl_db.clear();
            if (!v.IsNull()) rd.each(v, k, [&](const YAML::Node& x) { cfg.rho_pl_db.push_back(rd.real(x, k)); });
        } else if (k == "output_path") {
            cfg.output_path = rd.scalar<std::string>(v, k, "a path");
        } else if (k == "j_max") {
            cfg.j_max = rd.scalar<int>(v, k, "an integer");
        } else if (k == "bca_rel_tol") {
            cfg.bca_rel_tol = rd.real(v, k);
        } else if (k == "convergence_sweeps") {
            cfg.convergence_sweeps = rd.scalar<int>(v, k, "an integer");
        } else if (k == "rho_db_grid") {
            cfg.rho_db_grid.clear();
            rd.each(v, k, [&](const YAML::Node& x) { cfg.rho_db_grid.push_back(rd.real(x, k)); });
        } else if (k == "allocation") {
            const auto a = rd.scalar<std::string>(v, k, "exact or approx");
            if (a == "exact") cfg.allocation = RateAllocation::Exact;
            else if (a == "approx") cfg.allocation = RateAllocation::Approx;
            else throw ConfigError(k, line_of(v), "expected exact or approx, got '" + a + "'");
        } else if (k == "pilot_model") {
            const auto a = rd.scalar<std::string>(v, k, "power_controlled or raw");
            if (a == "power_controlled") cfg.pilot_model = PilotModel::PowerControlled;
            else if (a == "raw") cfg.pilot_model = PilotModel::Raw;
            else throw ConfigError(k, line_of(v), "expected power_controlled or raw, got '" + a + "'");
        } else {
            throw ConfigError(k, line_of(kv.first), "unknown key");
        }
    }
    return cfg;
}

void apply_override(YAML::Node& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(spec, 0, "override must look like key=value");
    const std::string key = spec.substr(0, eq);
    const auto& keys = config_keys();
    if (!contains(keys, key) || key == "scenario") throw ConfigError(key, 0, "unknown key in override");

    YAML::Node value;
    try {
        value = YAML::Load(spec.substr(eq + 1));
    } catch (const YAML::Exception& e) {
        throw ConfigError(key, 0, std::string("unparseable override value: ") + e.what());
    }
    if (!root.IsMap()) root = YAML::Node(YAML::NodeType::Map);
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        root[key] = value;
    } else {
        YAML::Node sub = root[key.substr(0, dot)];
        if (!sub.IsMap()) throw ConfigError("scenario", line_of(sub), "expected a mapping");
        sub[key.substr(dot + 1)] = value;
    }
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& k : kTopKeys) {
            out.push_back(k);
            if (k == "scenario")
                for (const auto& s : kScenarioKeys) out.push_back("scenario." + s);
        }
        return out;
    }();
    return keys;
}

ExperimentConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line + 1, e.msg);
    }
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    if (root.IsMap() && root["scenario"] && !root["scenario"].IsMap())
        throw ConfigError("scenario", line_of(root["scenario"]), "expected a mapping");
    if (root.IsMap() && !root["scenario"]) root["scenario"] = YAML::Node(YAML::NodeType::Map);
    for (const auto& o : overrides) apply_override(root, o);

    Reader rd;
    ExperimentConfig cfg = read(root, rd);
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        const auto it = rd.lines.find(e.key());
        if (it == rd.lines.end() || it->second == 0) throw;
        // Re-issue with the source line attached.
        const std::string what = e.what();
        throw ConfigError(e.key(), it->second, what.substr(what.find(": ") + 2));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    if (path.empty()) return parse_config("", overrides);
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

}  // namespace fhdr
