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

#include "fhdr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "fhdr/capacity.hpp"
#include "fhdr/compression.hpp"

namespace fhdr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBoundSlack = 1e-9;
constexpr std::size_t kMaxFailureMessages = 8;

// Capacities at one (method, N, R) point of one trial.
struct Point {
    double sic = 0.0;
    double lmmse_sum = 0.0;
    std::vector<double> user;
    bool fronthaul_limited = false;  // every receiver had delta > 10
};

// [method][N index][R index]
using Grid = std::vector<std::vector<std::vector<Point>>>;

struct TrialGrid {
    double full_mi = 0.0;
    Grid pts;
};

void merge(RunCounters& into, const RunCounters& c) {
    into.evaluated_points += c.evaluated_points;
    into.cutset_violations += c.cutset_violations;
    into.lmmse_violations += c.lmmse_violations;
    into.max_uqn_residual = std::max(into.max_uqn_residual, c.max_uqn_residual);
    into.approx_checked += c.approx_checked;
    into.approx_within += c.approx_within;
    into.bca_updates += c.bca_updates;
    into.bca_decreases += c.bca_decreases;
}

std::vector<int> dims_for(DrMethod m, const ExperimentConfig& cfg) {
    if (m == DrMethod::None) return {cfg.scenario.M};
    return cfg.N_policy.candidates(cfg.scenario);
}

std::vector<std::string> method_labels(const ExperimentConfig& cfg, const std::string& suffix) {
    std::vector<std::string> out;
    for (DrMethod m : cfg.methods) out.push_back(std::string(to_string(m)) + suffix);
    return out;
}

std::vector<std::vector<int>> method_dims(const ExperimentConfig& cfg) {
    std::vector<std::vector<int>> out;
    for (DrMethod m : cfg.methods) out.push_back(dims_for(m, cfg));
    return out;
}

struct Drawn {
    Scenario sc;
    ChannelSet cs;
};

Drawn draw_trial(const ExperimentConfig& cfg, int trial) {
    RngStream geo(cfg.scenario.seed, static_cast<std::uint64_t>(trial), StreamTag::Geometry);
    RngStream fad(cfg.scenario.seed, static_cast<std::uint64_t>(trial), StreamTag::Fading);
    Drawn d;
    d.sc = generate_scenario(cfg.scenario, geo);
    d.cs = draw_channels(d.sc, cfg.scenario, fad);
    return d;
}

FilterBank design(DrMethod m, const ChannelSet& cs, int N, const ExperimentConfig& cfg, RunCounters& c) {
    if (m != DrMethod::TCKLT) return design_filters(m, cs, N, cfg.bca());
    BcaResult r = tcklt_bca(cs, N, cfg.bca());
    double prev = r.sweep_mi.front();
    for (double v : r.update_mi) {
        ++c.bca_updates;
        if (v < prev - kBoundSlack) ++c.bca_decreases;
        prev = v;
    }
    return std::move(r.filters);
}

// Perfect-CSI evaluation of every method, N and R for one channel draw.
TrialGrid evaluate_perfect(const ChannelSet& cs, const ExperimentConfig& cfg, RunCounters& c,
                           std::vector<std::vector<double>>* joint = nullptr) {
    TrialGrid tg;
    tg.full_mi = full_mi(cs);
    for (DrMethod m : cfg.methods) {
        auto& per_n = tg.pts.emplace_back();
        if (joint) joint->emplace_back();
        for (int N : dims_for(m, cfg)) {
            const FilterBank fb = design(m, cs, N, cfg, c);
            if (joint) joint->back().push_back(joint_mi(cs, fb));
            const ReducedChannelSet rcs = reduce_channels(cs, fb);
            auto& per_r = per_n.emplace_back();
            for (double R : cfg.rate_grid) {
                const CompressionPlan plan = plan_uqn(rcs, R);
                const RVec delta = plan.deltas();
                Point p;
                p.sic = sum_capacity_sic(rcs, delta);
                const UserCapacities uc = user_capacities_lmmse(rcs, delta);
                p.user.assign(uc.capacity.data(), uc.capacity.data() + uc.capacity.size());
                p.lmmse_sum = uc.capacity.sum();
                p.fronthaul_limited = delta.minCoeff() > 10.0;

                ++c.evaluated_points;
                if (p.sic > std::min(cs.L() * R, tg.full_mi) + kBoundSlack) ++c.cutset_violations;
                if (p.lmmse_sum > p.sic + kBoundSlack) ++c.lmmse_violations;
                for (int l = 0; l < rcs.L(); ++l) {
                    const ReceiverPlan& rp = plan.receivers[l];
                    c.max_uqn_residual = std::max(c.max_uqn_residual, std::abs(uqn_rate(rp.sigma2, rp.delta) - R));
                    const double min_snr = cs.rho * rcs.eig[l].values.minCoeff();
                    if (min_snr > 100.0 && std::exp2(R / rcs.N()) > 100.0) {
                        ++c.approx_checked;
                        const double approx = cs.rho * rcs.gamma_bar(l) * std::exp2(-R / rcs.N());
                        if (std::abs(approx - rp.delta) <= 0.05 * rp.delta) ++c.approx_within;
                    }
                }
                per_r.push_back(std::move(p));
            }
        }
    }
    return tg;
}

double metric(const Point& p, Detection d) { return d == Detection::SIC ? p.sic : p.lmmse_sum; }

// Mean and standard error in the order given.
std::pair<double, double> mean_stderr(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Turns the per-trial grids (successful trials only, ascending trial index)
// into rows: one per (method, N, R), then the curve-level envelope and the
// per-trial envelope whenever a method has more than one N.
void emit_rows(const ExperimentConfig& cfg, const std::vector<const TrialGrid*>& trials,
               const std::vector<std::string>& labels, const std::vector<std::vector<int>>& dims,
               std::optional<double> rho_pl, bool fronthaul_diag, SweepResult& out) {
    const int T = static_cast<int>(trials.size());
    if (T == 0) return;
    const int L = cfg.scenario.L;
    const std::size_t nR = cfg.rate_grid.size();

    std::vector<double> full(T);
    for (int t = 0; t < T; ++t) full[t] = trials[t]->full_mi;
    const double mean_full = mean_stderr(full).first;
    std::vector<double> cutset(nR);
    for (std::size_t r = 0; r < nR; ++r) {
        std::vector<double> v(T);
        for (int t = 0; t < T; ++t) v[t] = std::min(L * cfg.rate_grid[r], full[t]);
        cutset[r] = mean_stderr(v).first;
    }

    auto make_row = [&](const std::string& label, std::size_t r, int N, const std::vector<double>& sums,
                        std::vector<double> users, double frac) {
        ResultRow row;
        row.method = label;
        row.R = cfg.rate_grid[r];
        row.N_used = N;
        row.rho_db = cfg.scenario.rho_db;
        row.rho_pl_db = rho_pl;
        const auto [mean, se] = mean_stderr(sums);
        row.mean_sum_capacity = mean;
        row.mean_user_capacity = users.empty() ? kNaN : mean_stderr(users).first;
        row.outage5_user_capacity = users.empty() ? kNaN : quantile(std::move(users), 0.05);
        row.cutset = cutset[r];
        row.full_mi = mean_full;
        row.trials = T;
        row.seed = cfg.scenario.seed;
        out.rows.push_back(std::move(row));
        out.diagnostics.push_back({se, frac});
    };

    for (std::size_t m = 0; m < labels.size(); ++m) {
        const std::size_t nN = dims[m].size();
        // means[n][r] for the curve-level envelope
        std::vector<std::vector<double>> means(nN, std::vector<double>(nR));
        for (std::size_t n = 0; n < nN; ++n) {
            for (std::size_t r = 0; r < nR; ++r) {
                std::vector<double> sums(T), users;
                int limited = 0;
                for (int t = 0; t < T; ++t) {
                    const Point& p = trials[t]->pts[m][n][r];
                    sums[t] = metric(p, cfg.detection);
                    users.insert(users.end(), p.user.begin(), p.user.end());
                    limited += p.fronthaul_limited ? 1 : 0;
                }
                means[n][r] = mean_stderr(sums).first;
                make_row(labels[m], r, dims[m][n], sums, std::move(users),
                         fronthaul_diag ? static_cast<double>(limited) / T : kNaN);
            }
        }
        if (nN < 2) continue;

        for (std::size_t r = 0; r < nR; ++r) {
            std::size_t best = 0;
            for (std::size_t n = 1; n < nN; ++n)
                if (means[n][r] > means[best][r]) best = n;
            std::vector<double> sums(T), users;
            for (int t = 0; t < T; ++t) {
                const Point& p = trials[t]->pts[m][best][r];
                sums[t] = metric(p, cfg.detection);
                users.insert(users.end(), p.user.begin(), p.user.end());
            }
            make_row(labels[m] + ":envelope", r, dims[m][best], sums, std::move(users), kNaN);
        }
        for (std::size_t r = 0; r < nR; ++r) {
            std::vector<double> sums(T), users;
            std::vector<int> chosen(nN, 0);
            for (int t = 0; t < T; ++t) {
                std::size_t best = 0;
                for (std::size_t n = 1; n < nN; ++n)
                    if (metric(trials[t]->pts[m][n][r], cfg.detection) >
                        metric(trials[t]->pts[m][best][r], cfg.detection))
                        best = n;
                const Point& p = trials[t]->pts[m][best][r];
                sums[t] = metric(p, cfg.detection);
                users.insert(users.end(), p.user.begin(), p.user.end());
                ++chosen[best];
            }
            const auto mode = static_cast<std::size_t>(std::max_element(chosen.begin(), chosen.end()) - chosen.begin());
            make_row(labels[m] + ":trial_envelope", r, dims[m][mode], sums, std::move(users), kNaN);
        }
    }
}

// Outcome of one trial: a value or the failure message.
template <typename T>
struct Slot {
    std::optional<T> value;
    std::string error;
};

template <typename T, typename F>
std::vector<Slot<T>> run_trials(const ExperimentConfig& cfg, const RunOptions& opts, F&& body) {
    std::vector<Slot<T>> slots(static_cast<std::size_t>(cfg.trials));
    std::atomic<int> done{0};
    parallel_for(cfg.trials, opts.workers, [&](int t) {
        try {
            slots[t].value.emplace(body(t));
        } catch (const std::exception& e) {
            slots[t].error = e.what();
        }
        const int d = ++done;
        if (opts.progress) opts.progress(d, cfg.trials);
    });
    return slots;
}

template <typename T>
void note_failures(const std::vector<Slot<T>>& slots, int& failed, std::vector<std::string>* messages) {
    for (std::size_t t = 0; t < slots.size(); ++t) {
        if (slots[t].value) continue;
        ++failed;
        if (messages && messages->size() < kMaxFailureMessages)
            messages->push_back("trial " + std::to_string(t) + ": " + slots[t].error);
    }
}

struct SweepTrial {
    TrialGrid grid;
    RunCounters counters;
    std::vector<std::vector<double>> joint;  // [method][N]
};

std::vector<Slot<SweepTrial>> sweep_trials(const ExperimentConfig& cfg, const RunOptions& opts) {
    return run_trials<SweepTrial>(cfg, opts, [&](int t) {
        const Drawn d = draw_trial(cfg, t);
        SweepTrial st;
        st.grid = evaluate_perfect(d.cs, cfg, st.counters, &st.joint);
        return st;
    });
}

SweepResult collect_sweep(const ExperimentConfig& cfg, const std::vector<Slot<SweepTrial>>& slots) {
    SweepResult res;
    note_failures(slots, res.failed_trials, &res.failure_messages);
    std::vector<const TrialGrid*> ok;
    for (const auto& s : slots)
        if (s.value) {
            ok.push_back(&s.value->grid);
            merge(res.counters, s.value->counters);
        }
    emit_rows(cfg, ok, method_labels(cfg, ""), method_dims(cfg), std::nullopt, true, res);
    return res;
}

}  // namespace

// ---------------------------------------------------------------- config

std::vector<int> NPolicy::candidates(const ScenarioConfig& sc) const {
    if (!automatic) return fixed;
    std::vector<int> out;
    for (int N = min_reduced_dimension(sc.K, sc.L); N <= max_reduced_dimension(sc.K, sc.M); ++N) out.push_back(N);
    return out;
}

std::string_view to_string(Detection d) { return d == Detection::SIC ? "SIC" : "LMMSE"; }
std::string_view to_string(RateAllocation a) { return a == RateAllocation::Exact ? "exact" : "approx"; }
std::string_view to_string(PilotModel p) { return p == PilotModel::PowerControlled ? "power_controlled" : "raw"; }

void ExperimentConfig::validate() const {
    const ScenarioConfig& s = scenario;
    if (s.K < 1) throw ConfigError("scenario.K", 0, "must be >= 1");
    if (s.L < 1) throw ConfigError("scenario.L", 0, "must be >= 1");
    if (s.M < 1) throw ConfigError("scenario.M", 0, "must be >= 1");
    if (!s.antenna_excess()) throw ConfigError("scenario.M", 0, "M * L must be at least K");
    if (!(s.area_side > 0.0) || !std::isfinite(s.area_side))
        throw ConfigError("scenario.area_side", 0, "must be positive and finite");
    if (!std::isfinite(s.user_height)) throw ConfigError("scenario.user_height", 0, "must be finite");
    if (!std::isfinite(s.rx_height)) throw ConfigError("scenario.rx_height", 0, "must be finite");
    if (!(s.pathloss_exponent > 0.0)) throw ConfigError("scenario.pathloss_exponent", 0, "must be positive");
    if (!(s.shadow_sigma_db >= 0.0) || !std::isfinite(s.shadow_sigma_db))
        throw ConfigError("scenario.shadow_sigma_db", 0, "must be finite and >= 0");
    if (!std::isfinite(s.rho_db)) throw ConfigError("scenario.rho_db", 0, "must be finite");

    if (rate_grid.empty()) throw ConfigError("rate_grid", 0, "must not be empty");
    for (std::size_t i = 0; i < rate_grid.size(); ++i) {
        if (!(rate_grid[i] > 0.0) || !std::isfinite(rate_grid[i]))
            throw ConfigError("rate_grid", 0, "rates must be positive and finite");
        if (i > 0 && !(rate_grid[i] > rate_grid[i - 1])) throw ConfigError("rate_grid", 0, "must be strictly ascending");
    }
    if (!N_policy.automatic) {
        if (N_policy.fixed.empty()) throw ConfigError("N_policy", 0, "must be 'auto' or a non-empty list");
        const int lo = min_reduced_dimension(s.K, s.L), hi = max_reduced_dimension(s.K, s.M);
        for (std::size_t i = 0; i < N_policy.fixed.size(); ++i) {
            const int N = N_policy.fixed[i];
            if (N < lo || N > hi)
                throw ConfigError("N_policy", 0,
                                  "N = " + std::to_string(N) + " outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
            if (i > 0 && !(N > N_policy.fixed[i - 1])) throw ConfigError("N_policy", 0, "must be strictly ascending");
        }
    }
    if (methods.empty()) throw ConfigError("methods", 0, "must not be empty");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (methods[i] == methods[j]) throw ConfigError("methods", 0, "duplicate method");
    if (trials < 1) throw ConfigError("trials", 0, "must be >= 1");
    for (double v : rho_pl_db)
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
            throw ConfigError("rho_pl_db", 0, "entries must be numbers or inf");
    if (output_path.empty()) throw ConfigError("output_path", 0, "must not be empty");
    if (j_max < 1) throw ConfigError("j_max", 0, "must be >= 1");
    if (!(bca_rel_tol >= 0.0)) throw ConfigError("bca_rel_tol", 0, "must be >= 0");
    if (convergence_sweeps < j_max) throw ConfigError("convergence_sweeps", 0, "must be >= j_max");
    if (rho_db_grid.empty()) throw ConfigError("rho_db_grid", 0, "must not be empty");
    for (double v : rho_db_grid)
        if (!std::isfinite(v)) throw ConfigError("rho_db_grid", 0, "entries must be finite");
}

// ---------------------------------------------------------------- pool

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    if (n <= 0) return;
    const int W = std::clamp(workers, 1, n);
    if (W == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

// ---------------------------------------------------------------- experiments

SweepResult run_rate_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    return collect_sweep(cfg, sweep_trials(cfg, opts));
}

ComparisonResult run_dr_comparison(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const auto slots = sweep_trials(cfg, opts);
    ComparisonResult res;
    res.sweep = collect_sweep(cfg, slots);

    const auto find = [&](DrMethod m) {
        return static_cast<int>(std::find(cfg.methods.begin(), cfg.methods.end(), m) - cfg.methods.begin());
    };
    const int ic = find(DrMethod::TCKLT), ik = find(DrMethod::TKLT);
    if (ic == static_cast<int>(cfg.methods.size()) || ik == static_cast<int>(cfg.methods.size())) return res;
    const std::vector<int> dims = cfg.N_policy.candidates(cfg.scenario);
    for (std::size_t n = 0; n < dims.size(); ++n) {
        PairedStats ps;
        ps.N = dims[n];
        for (const auto& s : slots) {
            if (!s.value) continue;
            ++ps.trials;
            if (s.value->joint[ic][n] >= s.value->joint[ik][n] - kBoundSlack) ++ps.tcklt_ge_tklt;
        }
        res.paired.push_back(ps);
    }
    return res;
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const std::vector<int> dims = cfg.N_policy.candidates(cfg.scenario);
    const int S = cfg.convergence_sweeps;
    struct Trial {
        std::vector<std::vector<double>> mi;  // [N][sweep], padded to S + 1
        double full = 0.0;
        RunCounters counters;
    };
    const auto slots = run_trials<Trial>(cfg, opts, [&](int t) {
        const Drawn d = draw_trial(cfg, t);
        Trial tr;
        tr.full = full_mi(d.cs);
        // No early stopping: the whole trajectory is recorded.
        const BcaOptions bo{S, -std::numeric_limits<double>::infinity()};
        for (int N : dims) {
            const BcaResult r = tcklt_bca(d.cs, N, bo);
            double prev = r.sweep_mi.front();
            for (double v : r.update_mi) {
                ++tr.counters.bca_updates;
                if (v < prev - kBoundSlack) ++tr.counters.bca_decreases;
                prev = v;
            }
            std::vector<double> mi = r.sweep_mi;
            mi.resize(static_cast<std::size_t>(S) + 1, mi.back());
            tr.mi.push_back(std::move(mi));
        }
        return tr;
    });

    ConvergenceResult res;
    note_failures(slots, res.failed_trials, nullptr);
    res.N_values = dims;
    res.within_1pct.assign(dims.size(), 0);
    res.trials.assign(dims.size(), 0);
    for (std::size_t n = 0; n < dims.size(); ++n) {
        for (int j = 0; j <= S; ++j) {
            std::vector<double> norm, raw;
            for (const auto& s : slots) {
                if (!s.value) continue;
                raw.push_back(s.value->mi[n][j]);
                norm.push_back(s.value->mi[n][j] / s.value->full);
            }
            if (raw.empty()) continue;
            res.rows.push_back({dims[n], j, mean_stderr(norm).first, mean_stderr(raw).first, static_cast<int>(raw.size()),
                                cfg.scenario.seed});
        }
        for (const auto& s : slots) {
            if (!s.value) continue;
            ++res.trials[n];
            const double fin = s.value->mi[n][S], early = s.value->mi[n][cfg.j_max];
            if (std::abs(fin - early) <= 0.01 * std::abs(fin)) ++res.within_1pct[n];
        }
    }
    for (const auto& s : slots)
        if (s.value) merge(res.counters, s.value->counters);
    return res;
}

SweepResult run_imperfect_csi(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const double rho = cfg.scenario.rho();
    const std::size_t P = cfg.rho_pl_db.size();
    struct Trial {
        TrialGrid perfect;
        std::vector<TrialGrid> bound, genie;  // per rho_pl
        RunCounters counters;
    };
    const auto slots = run_trials<Trial>(cfg, opts, [&](int t) {
        const Drawn d = draw_trial(cfg, t);
        Trial tr;
        tr.perfect = evaluate_perfect(d.cs, cfg, tr.counters);
        for (double pl_db : cfg.rho_pl_db) {
            // A fresh pilot stream per pilot SNR keeps the noise draw shared.
            RngStream pilot(cfg.scenario.seed, static_cast<std::uint64_t>(t), StreamTag::Pilot);
            const EstimatedChannelSet est = estimate_channels(d.cs, d.sc, db_to_linear(pl_db), pilot, cfg.pilot_model);
            const WhitenedChannelSet wcs = whitening(est, rho);
            const ChannelSet wch = wcs.as_channel_set();
            TrialGrid& b = tr.bound.emplace_back();
            TrialGrid& g = tr.genie.emplace_back();
            b.full_mi = g.full_mi = tr.perfect.full_mi;
            for (DrMethod m : cfg.methods) {
                auto& bn = b.pts.emplace_back();
                auto& gn = g.pts.emplace_back();
                for (int N : dims_for(m, cfg)) {
                    const FilterBank fb = design(m, wch, N, cfg, tr.counters);
                    const ReducedChannelSet rcs = reduced_channel_imperfect(wcs, fb);
                    auto& br = bn.emplace_back();
                    auto& gr = gn.emplace_back();
                    for (double R : cfg.rate_grid) {
                        const CompressionPlan plan = plan_imperfect(rcs, R, cfg.allocation);
                        Point pb;
                        pb.sic = sum_capacity_imperfect(rcs.G, plan, rho);
                        const UserCapacities ub = user_capacities_imperfect(rcs.G, plan, rho);
                        pb.user.assign(ub.capacity.data(), ub.capacity.data() + ub.capacity.size());
                        pb.lmmse_sum = ub.capacity.sum();

                        const CompressionPlan real =
                            with_component_variances(plan, realized_component_variances(est, wcs, fb, plan));
                        Point pg;
                        pg.sic = genie_sum_capacity(est, wcs, fb, real);
                        const UserCapacities ug = genie_user_capacities(est, wcs, fb, real);
                        pg.user.assign(ug.capacity.data(), ug.capacity.data() + ug.capacity.size());
                        pg.lmmse_sum = ug.capacity.sum();

                        const double cut = std::min(cfg.scenario.L * R, tr.perfect.full_mi);
                        for (const Point* p : {&pb, &pg}) {
                            ++tr.counters.evaluated_points;
                            if (p->sic > cut + kBoundSlack) ++tr.counters.cutset_violations;
                            if (p->lmmse_sum > p->sic + kBoundSlack) ++tr.counters.lmmse_violations;
                        }
                        br.push_back(std::move(pb));
                        gr.push_back(std::move(pg));
                    }
                }
            }
        }
        return tr;
    });

    SweepResult res;
    note_failures(slots, res.failed_trials, &res.failure_messages);
    std::vector<const Trial*> ok;
    for (const auto& s : slots)
        if (s.value) {
            ok.push_back(&*s.value);
            merge(res.counters, s.value->counters);
        }
    const auto dims = method_dims(cfg);
    std::vector<const TrialGrid*> view;
    for (const Trial* t : ok) view.push_back(&t->perfect);
    emit_rows(cfg, view, method_labels(cfg, ""), dims, std::nullopt, true, res);
    for (std::size_t p = 0; p < P; ++p) {
        view.clear();
        for (const Trial* t : ok) view.push_back(&t->bound[p]);
        emit_rows(cfg, view, method_labels(cfg, ""), dims, cfg.rho_pl_db[p], false, res);
        view.clear();
        for (const Trial* t : ok) view.push_back(&t->genie[p]);
        emit_rows(cfg, view, method_labels(cfg, ":genie"), dims, cfg.rho_pl_db[p], false, res);
    }
    return res;
}

ScalingResult run_snr_scaling(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const auto dims = method_dims(cfg);
    const std::size_t G = cfg.rho_db_grid.size();
    struct Trial {
        std::vector<double> full;                            // [rho]
        std::vector<std::vector<std::vector<double>>> joint;  // [rho][method][N]
    };
    const auto slots = run_trials<Trial>(cfg, opts, [&](int t) {
        Drawn d = draw_trial(cfg, t);
        Trial tr;
        RunCounters unused;
        for (double rho_db : cfg.rho_db_grid) {
            d.cs.rho = db_to_linear(rho_db);
            tr.full.push_back(full_mi(d.cs));
            auto& per_m = tr.joint.emplace_back();
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                auto& per_n = per_m.emplace_back();
                for (int N : dims[m]) per_n.push_back(joint_mi(d.cs, design(cfg.methods[m], d.cs, N, cfg, unused)));
            }
        }
        return tr;
    });

    ScalingResult res;
    note_failures(slots, res.failed_trials, nullptr);
    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        for (std::size_t n = 0; n < dims[m].size(); ++n)
            for (std::size_t g = 0; g < G; ++g) {
                std::vector<double> jm, fm, fr;
                for (const auto& s : slots) {
                    if (!s.value) continue;
                    jm.push_back(s.value->joint[g][m][n]);
                    fm.push_back(s.value->full[g]);
                    fr.push_back(s.value->joint[g][m][n] / s.value->full[g]);
                }
                if (jm.empty()) continue;
                res.rows.push_back({std::string(to_string(cfg.methods[m])), dims[m][n], cfg.rho_db_grid[g],
                                    mean_stderr(jm).first, mean_stderr(fm).first, mean_stderr(fr).first,
                                    static_cast<int>(jm.size()), cfg.scenario.seed});
            }
    return res;
}

// ---------------------------------------------------------------- output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultHeader << '\n';
    for (const ResultRow& r : rows) {
        os << r.method << ',' << format_double(r.R) << ',' << r.N_used << ',' << format_double(r.rho_db) << ','
           << (r.rho_pl_db ? format_double(*r.rho_pl_db) : std::string()) << ','
           << format_double(r.mean_sum_capacity) << ',' << format_double(r.mean_user_capacity) << ','
           << format_double(r.outage5_user_capacity) << ',' << format_double(r.cutset) << ','
           << format_double(r.full_mi) << ',' << r.trials << ',' << r.seed << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << kConvergenceHeader << '\n';
    for (const ConvergenceRow& r : rows)
        os << r.N << ',' << r.sweep << ',' << format_double(r.mean_normalized_mi) << ','
           << format_double(r.mean_joint_mi) << ',' << r.trials << ',' << r.seed << '\n';
}

void write_csv(std::ostream& os, const std::vector<ScalingRow>& rows) {
    os << kScalingHeader << '\n';
    for (const ScalingRow& r : rows)
        os << r.method << ',' << r.N << ',' << format_double(r.rho_db) << ',' << format_double(r.mean_joint_mi) << ','
           << format_double(r.mean_full_mi) << ',' << format_double(r.mean_fraction) << ',' << r.trials << ','
           << r.seed << '\n';
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= values.size()) return values.back();
    const double f = pos - static_cast<double>(i);
    return values[i] + f * (values[i + 1] - values[i]);
}

}  // namespace fhdr
