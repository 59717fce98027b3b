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
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhdr/dimred.hpp"
#include "fhdr/imperfect_csi.hpp"
#include "fhdr/scenario.hpp"

namespace fhdr {

// A configuration problem. key is the dotted path of the offending entry and
// line the 1-based source line, or 0 when the value did not come from a file.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string key, int line, const std::string& what)
        : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

   private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string s = "config error";
        if (!key.empty()) s += " at '" + key + "'";
        if (line > 0) s += " (line " + std::to_string(line) + ")";
        return s + ": " + what;
    }
    std::string key_;
    int line_ = 0;
};

enum class Detection { SIC, LMMSE };

// Either a fixed list of reduced dimensions, or "auto": every admissible N
// from ceil(K/L) to min(M, K), with the envelope over N reported as well.
struct NPolicy {
    bool automatic = true;
    std::vector<int> fixed;

    std::vector<int> candidates(const ScenarioConfig& sc) const;
};

struct ExperimentConfig {
    ScenarioConfig scenario;
    std::vector<double> rate_grid{5, 10, 15, 20, 25, 30, 35, 40};  // bpcu per receiver
    NPolicy N_policy;
    std::vector<DrMethod> methods{DrMethod::TCKLT, DrMethod::None};
    Detection detection = Detection::SIC;
    int trials = 500;
    std::vector<double> rho_pl_db{0, 10, 20};  // +inf allowed: perfect estimates
    std::string output_path = "results";
    int j_max = 3;
    double bca_rel_tol = 1e-6;
    int convergence_sweeps = 20;
    std::vector<double> rho_db_grid{0, 5, 10, 15, 20, 25, 30};
    RateAllocation allocation = RateAllocation::Exact;
    PilotModel pilot_model = PilotModel::PowerControlled;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    BcaOptions bca() const { return {j_max, bca_rel_tol}; }
};

std::string_view to_string(Detection d);
std::string_view to_string(RateAllocation a);
std::string_view to_string(PilotModel p);

// One CSV line. rho_pl_db is empty for perfect-CSI rows.
struct ResultRow {
    std::string method;
    double R = 0.0;
    int N_used = 0;
    double rho_db = 0.0;
    std::optional<double> rho_pl_db;
    double mean_sum_capacity = 0.0;
    double mean_user_capacity = 0.0;
    double outage5_user_capacity = 0.0;
    double cutset = 0.0;
    double full_mi = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

// Side statistics for a row, kept out of the CSV.
struct RowDiagnostics {
    double sum_capacity_stderr = 0.0;
    // Fraction of trials in which every receiver had delta > 10; NaN when not
    // applicable (envelope and imperfect-CSI rows).
    double frac_fronthaul_limited = 0.0;
};

struct RunCounters {
    long evaluated_points = 0;
    long cutset_violations = 0;  // SIC sum capacity > min(L R, full MI) + 1e-9
    long lmmse_violations = 0;   // sum of LMMSE user capacities > SIC + 1e-9
    double max_uqn_residual = 0.0;
    long approx_checked = 0;  // points with min rho gamma > 100 and 2^{R/N} > 100
    long approx_within = 0;   // of those, delta approximation within 5%
    long bca_updates = 0;
    long bca_decreases = 0;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<RowDiagnostics> diagnostics;  // parallel to rows
    int failed_trials = 0;
    std::vector<std::string> failure_messages;  // first few, trial-ordered
    RunCounters counters;
};

// Paired T-CKLT against T-KLT on the same channels.
struct PairedStats {
    int N = 0;
    int trials = 0;
    int tcklt_ge_tklt = 0;  // joint MI, with 1e-9 slack
};

struct ComparisonResult {
    SweepResult sweep;
    std::vector<PairedStats> paired;
};

struct ConvergenceRow {
    int N = 0;
    int sweep = 0;
    double mean_normalized_mi = 0.0;
    double mean_joint_mi = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    int failed_trials = 0;
    // Per N: trials whose objective at sweep j_max is within 1% of the final sweep.
    std::vector<int> N_values;
    std::vector<int> within_1pct;
    std::vector<int> trials;
    RunCounters counters;
};

struct ScalingRow {
    std::string method;
    int N = 0;
    double rho_db = 0.0;
    double mean_joint_mi = 0.0;
    double mean_full_mi = 0.0;
    double mean_fraction = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    int failed_trials = 0;
};

struct RunOptions {
    int workers = 1;
    // Called from worker threads after each finished trial.
    std::function<void(int done, int total)> progress;
};

SweepResult run_rate_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});
ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts = {});
ComparisonResult run_dr_comparison(const ExperimentConfig& cfg, const RunOptions& opts = {});
SweepResult run_imperfect_csi(const ExperimentConfig& cfg, const RunOptions& opts = {});
ScalingResult run_snr_scaling(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Runs body(trial) for trial = 0..n-1 on a pool of workers. Each index is
/// processed exactly once; exceptions propagate after all workers stop.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

// ---------------------------------------------------------------- output

inline constexpr const char* kResultHeader =
    "method,R,N_used,rho_db,rho_pl_db,mean_sum_capacity,mean_user_capacity,outage5_user_capacity,cutset,full_mi,"
    "trials,seed";
inline constexpr const char* kConvergenceHeader = "N,sweep,mean_normalized_mi,mean_joint_mi,trials,seed";
inline constexpr const char* kScalingHeader = "method,N,rho_db,mean_joint_mi,mean_full_mi,mean_fraction,trials,seed";

/// %.9g, with inf/-inf/nan spelled out.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_csv(std::ostream& os, const std::vector<ScalingRow>& rows);

/// Linear-interpolated q-quantile of the values (sorted copy).
double quantile(std::vector<double> values, double q);

}  // namespace fhdr
