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
//
// fhdr command-line front end.
//
//   fhdr sweep --config base.yaml --overrides scenario.rho_db=25
//   fhdr imperfect-csi --trials 100 --workers 4 --output-dir out
//   fhdr selftest

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhdr/config.hpp"
#include "fhdr/harness.hpp"
#include "fhdr/output.hpp"
#include "fhdr/selftest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Verbosity { Quiet, Normal, Verbose };

struct Invocation {
    std::string subcommand;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    Verbosity verbosity = Verbosity::Normal;
};

struct Emitted {
    std::string figure;  // "fig2" etc.
    std::string csv;
    json summary;
};

template <typename Rows>
std::string to_csv(const Rows& rows) {
    std::ostringstream os;
    fhdr::write_csv(os, rows);
    return os.str();
}

json sweep_summary(const fhdr::SweepResult& r) {
    json s{{"failed_trials", r.failed_trials}, {"counters", fhdr::counters_to_json(r.counters)}};
    if (!r.failure_messages.empty()) s["failures"] = r.failure_messages;
    return s;
}

Emitted run(const std::string& sub, const fhdr::ExperimentConfig& cfg, const fhdr::RunOptions& opts) {
    if (sub == "sweep") {
        const auto r = fhdr::run_rate_sweep(cfg, opts);
        return {cfg.detection == fhdr::Detection::LMMSE ? "fig9" : "fig2", to_csv(r.rows), sweep_summary(r)};
    }
    if (sub == "compare-dr") {
        const auto r = fhdr::run_dr_comparison(cfg, opts);
        json s = sweep_summary(r.sweep);
        s["paired_tcklt_ge_tklt"] = json::array();
        for (const auto& p : r.paired)
            s["paired_tcklt_ge_tklt"].push_back({{"N", p.N}, {"trials", p.trials}, {"count", p.tcklt_ge_tklt}});
        return {"fig8", to_csv(r.sweep.rows), s};
    }
    if (sub == "imperfect-csi") {
        const auto r = fhdr::run_imperfect_csi(cfg, opts);
        return {"fig10", to_csv(r.rows), sweep_summary(r)};
    }
    if (sub == "converge") {
        const auto r = fhdr::run_convergence(cfg, opts);
        json s{{"failed_trials", r.failed_trials}, {"counters", fhdr::counters_to_json(r.counters)}};
        s["within_1pct_at_j_max"] = json::array();
        for (std::size_t i = 0; i < r.N_values.size(); ++i)
            s["within_1pct_at_j_max"].push_back({{"N", r.N_values[i]}, {"trials", r.trials[i]}, {"count", r.within_1pct[i]}});
        return {"fig3", to_csv(r.rows), s};
    }
    // snr-scaling
    const auto r = fhdr::run_snr_scaling(cfg, opts);
    return {"fig4", to_csv(r.rows), json{{"failed_trials", r.failed_trials}}};
}

int dispatch(const Invocation& inv) {
    if (inv.subcommand == "selftest") {
        const auto s = fhdr::run_selftest(std::cout);
        return s.failed == 0 ? 0 : 1;
    }

    std::vector<std::string> overrides = inv.overrides;
    if (inv.seed) overrides.push_back("scenario.seed=" + std::to_string(*inv.seed));
    if (inv.trials) overrides.push_back("trials=" + std::to_string(*inv.trials));
    fhdr::ExperimentConfig cfg;
    try {
        cfg = fhdr::load_config(inv.config_path, overrides);
    } catch (const fhdr::ConfigError& e) {
        std::cerr << "fhdr: " << e.what() << '\n';
        return 2;
    }

    const fs::path out_dir = inv.output_dir.empty() ? fs::path(cfg.output_path) : fs::path(inv.output_dir);
    fs::create_directories(out_dir);

    fhdr::RunOptions opts;
    opts.workers = inv.workers;
    std::mutex mu;
    if (inv.verbosity == Verbosity::Verbose) {
        opts.progress = [&](int done, int total) {
            if (done % std::max(1, total / 20) != 0 && done != total) return;
            std::lock_guard lock(mu);
            std::cerr << "\r" << inv.subcommand << ": " << done << "/" << total << " trials" << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Emitted em = run(inv.subcommand, cfg, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string csv_name = em.figure + ".csv";
    const std::string plot_name = em.figure + ".plot.json";
    fhdr::write_file(out_dir / csv_name, em.csv);
    fhdr::write_file(out_dir / plot_name, fhdr::plot_descriptor(em.figure, csv_name).dump(2) + "\n");

    json record{{"subcommand", inv.subcommand},
                {"config", fhdr::config_to_json(cfg)},
                {"seed", cfg.scenario.seed},
                {"version", fhdr::version_string()},
                {"workers", inv.workers},
                {"wall_time_s", wall},
                {"outputs", {csv_name, plot_name}},
                {"summary", em.summary}};
    fhdr::append_jsonl(out_dir / "manifest.jsonl", record);

    if (inv.verbosity != Verbosity::Quiet)
        std::cout << "wrote " << (out_dir / csv_name).string() << " (" << cfg.trials << " trials, "
                  << em.summary.value("failed_trials", 0) << " failed, " << wall << " s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimension-reduction fronthaul compression experiments"};
    app.require_subcommand(1);
    Invocation inv;
    bool quiet = false, verbose = false;

    const char* subs[][2] = {
        {"sweep", "rate sweep with the N envelope (fig2, or fig9 under LMMSE detection)"},
        {"converge", "BCA objective per sweep (fig3)"},
        {"compare-dr", "paired comparison of reduction methods (fig8)"},
        {"imperfect-csi", "lower-bound and genie capacities for each pilot SNR (fig10)"},
        {"snr-scaling", "captured fraction of the full information vs SNR (fig4)"},
        {"selftest", "run the randomised invariant suites"},
    };
    for (const auto& s : subs) {
        CLI::App* sc = app.add_subcommand(s[0], s[1]);
        sc->add_option("--config", inv.config_path, "YAML experiment configuration")->check(CLI::ExistingFile);
        sc->add_option("--overrides", inv.overrides, "dotted.key=value, applied after the file")->take_all();
        sc->add_option("--output-dir", inv.output_dir, "output directory (default: output_path from the config)");
        sc->add_option("--workers", inv.workers, "worker threads")->check(CLI::PositiveNumber);
        sc->add_option("--seed", inv.seed, "overrides scenario.seed");
        sc->add_option("--trials", inv.trials, "overrides trials");
        sc->add_flag("-q,--quiet", quiet, "print nothing on success");
        sc->add_flag("-v,--verbose", verbose, "report progress on stderr");
        sc->final_callback([&inv, name = std::string(s[0])] { inv.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (quiet && verbose) {
        std::cerr << "fhdr: --quiet and --verbose are mutually exclusive\n";
        return 2;
    }
    inv.verbosity = quiet ? Verbosity::Quiet : verbose ? Verbosity::Verbose : Verbosity::Normal;

    try {
        return dispatch(inv);
    } catch (const fhdr::ConfigError& e) {
        std::cerr << "fhdr: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fhdr: " << e.what() << '\n';
        return 1;
    }
}
