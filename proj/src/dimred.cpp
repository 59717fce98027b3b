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

#include "fhdr/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fhdr {

namespace {

void check_channels(const std::vector<CMat>& H) {
    if (H.empty()) throw InvalidInput("channel set is empty");
    const auto M = H.front().rows(), K = H.front().cols();
    for (const auto& Hl : H) {
        if (Hl.rows() != M || Hl.cols() != K) throw InvalidInput("channel matrices have inconsistent shapes");
        if (!all_finite(Hl)) throw InvalidInput("channel matrix has non-finite entries");
    }
}

void check_bank(const ChannelSet& cs, const FilterBank& fb) {
    if (static_cast<int>(fb.W.size()) != cs.L()) throw InvalidInput("filter bank size does not match receiver count");
    for (const auto& W : fb.W)
        if (W.rows() != cs.M()) throw InvalidInput("filter row count does not match antenna count");
}

// sum_l G_l^H G_l for G_l = W_l^H H_l, skipping receiver `skip` (or none).
CMat reduced_gram_sum(const std::vector<CMat>& H, const std::vector<CMat>& W, int skip = -1) {
    const auto K = H.front().cols();
    CMat S = CMat::Zero(K, K);
    for (std::size_t l = 0; l < H.size(); ++l) {
        if (static_cast<int>(l) == skip) continue;
        const CMat G = W[l].adjoint() * H[l];
        S.noalias() += G.adjoint() * G;
    }
    return S;
}

// H A H^H with A = (I + rho S)^{-1}, returned in the explicitly PSD form X^H X.
CMat conditioned_covariance(const CMat& H, const CMat& S, double rho) {
    const auto K = S.rows();
    const CMat B = CMat::Identity(K, K) + rho * S;
    Eigen::LLT<CMat> llt(B);
    if (llt.info() != Eigen::Success) throw RankDeficient("conditioned_covariance: I + rho S not positive definite");
    const CMat X = llt.matrixL().solve(H.adjoint());
    return X.adjoint() * X;
}

FilterBank basis_selection(int M, const std::vector<std::vector<int>>& picks, int N, DrMethod method) {
    FilterBank fb;
    fb.N = N;
    fb.method = method;
    for (auto sel : picks) {
        std::sort(sel.begin(), sel.end());
        CMat W = CMat::Zero(M, N);
        for (int c = 0; c < N; ++c) W(sel[c], c) = 1.0;
        fb.W.push_back(std::move(W));
    }
    return fb;
}

}  // namespace

std::string_view to_string(DrMethod m) {
    switch (m) {
        case DrMethod::TKLT: return "TKLT";
        case DrMethod::TCKLT: return "TCKLT";
        case DrMethod::AntennaSelect: return "ANTENNA_SELECT";
        case DrMethod::AntennaReduce: return "ANTENNA_REDUCE";
        case DrMethod::None: return "NONE";
    }
    return "?";
}

DrMethod parse_dr_method(std::string_view name) {
    for (auto m : {DrMethod::TKLT, DrMethod::TCKLT, DrMethod::AntennaSelect, DrMethod::AntennaReduce, DrMethod::None})
        if (to_string(m) == name) return m;
    throw InvalidInput("unknown dimension reduction method '" + std::string(name) + "'");
}

int min_reduced_dimension(int K, int L) { return (K + L - 1) / L; }

int max_reduced_dimension(int K, int M) { return std::min(M, K); }

void check_reduced_dimension(int K, int L, int M, int N) {
    const int lo = min_reduced_dimension(K, L), hi = max_reduced_dimension(K, M);
    if (N < lo || N > hi)
        throw InvalidInput("reduced dimension N=" + std::to_string(N) + " outside [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
}

ReducedChannelSet reduce_channels(const std::vector<CMat>& H, const FilterBank& fb, double rho) {
    if (H.size() != fb.W.size()) throw InvalidInput("reduce_channels: filter bank size mismatch");
    ReducedChannelSet r;
    r.rho = rho;
    r.gamma_bar.resize(static_cast<Eigen::Index>(H.size()));
    for (std::size_t l = 0; l < H.size(); ++l) {
        CMat G = fb.W[l].adjoint() * H[l];
        HermitianEig e = hermitian_eig(G * G.adjoint());
        e.values = e.values.cwiseMax(0.0);
        double log_sum = 0.0;
        bool positive = true;
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            if (!(e.values(i) > 0.0)) {
                positive = false;
                break;
            }
            log_sum += std::log(e.values(i));
        }
        r.gamma_bar(static_cast<Eigen::Index>(l)) =
            positive ? std::exp(log_sum / static_cast<double>(e.values.size())) : 0.0;
        r.G.push_back(std::move(G));
        r.eig.push_back(std::move(e));
    }
    return r;
}

ReducedChannelSet reduce_channels(const ChannelSet& cs, const FilterBank& fb) {
    check_bank(cs, fb);
    return reduce_channels(cs.H, fb, cs.rho);
}

CMat tklt(const CMat& H, int N) {
    if (N < 1 || N > std::min(H.rows(), H.cols()))
        throw InvalidInput("tklt: N=" + std::to_string(N) + " must lie in [1, min(M, K)]");
    return principal_subspace(H * H.adjoint(), N);
}

FilterBank tklt_bank(const ChannelSet& cs, int N) {
    check_channels(cs.H);
    check_reduced_dimension(cs.K(), cs.L(), cs.M(), N);
    FilterBank fb;
    fb.N = N;
    fb.method = DrMethod::TKLT;
    for (const auto& H : cs.H) fb.W.push_back(tklt(H, N));
    return fb;
}

double local_mi(const CMat& H, const CMat& W, double rho) {
    const CMat G = W.adjoint() * H;
    return log2det_eye_plus(rho * G * G.adjoint());
}

double joint_mi(const ChannelSet& cs, const FilterBank& fb) {
    check_bank(cs, fb);
    return log2det_eye_plus(cs.rho * reduced_gram_sum(cs.H, fb.W));
}

double full_mi(const ChannelSet& cs) {
    check_channels(cs.H);
    CMat S = CMat::Zero(cs.K(), cs.K());
    for (const auto& H : cs.H) S.noalias() += H.adjoint() * H;
    return log2det_eye_plus(cs.rho * S);
}

double conditional_mi(int l, const ChannelSet& cs, const FilterBank& fb) {
    check_bank(cs, fb);
    if (l < 0 || l >= cs.L()) throw InvalidInput("conditional_mi: receiver index out of range");
    const CMat S = reduced_gram_sum(cs.H, fb.W, l);
    const CMat G = fb.W[l].adjoint() * cs.H[l];
    // W^H H A H^H W == conditioned_covariance(G, ...)
    return log2det_eye_plus(cs.rho * conditioned_covariance(G, S, cs.rho));
}

BcaResult tcklt_bca(const ChannelSet& cs, int N, const BcaOptions& opts) {
    check_channels(cs.H);
    check_reduced_dimension(cs.K(), cs.L(), cs.M(), N);
    if (opts.j_max < 1) throw InvalidInput("tcklt_bca: j_max must be >= 1");
    if (!std::isfinite(cs.rho) || cs.rho < 0.0) throw InvalidInput("tcklt_bca: rho must be finite and >= 0");

    const int L = cs.L();
    const auto K = cs.K();
    BcaResult res;
    res.filters.N = N;
    res.filters.method = DrMethod::TCKLT;
    std::vector<CMat> gram(L);
    for (int l = 0; l < L; ++l) {
        res.filters.W.push_back(tklt(cs.H[l], N));
        const CMat G = res.filters.W[l].adjoint() * cs.H[l];
        gram[l] = G.adjoint() * G;
    }
    auto gram_sum = [&](int skip) {
        CMat S = CMat::Zero(K, K);
        for (int i = 0; i < L; ++i)
            if (i != skip) S += gram[i];
        return S;
    };

    double mi = log2det_eye_plus(cs.rho * gram_sum(-1));
    res.sweep_mi.push_back(mi);
    for (int j = 1; j <= opts.j_max; ++j) {
        const double before = mi;
        for (int l = 0; l < L; ++l) {
            const CMat S_other = gram_sum(l);
            res.filters.W[l] = principal_subspace(conditioned_covariance(cs.H[l], S_other, cs.rho), N);
            const CMat G = res.filters.W[l].adjoint() * cs.H[l];
            gram[l] = G.adjoint() * G;
            const double updated = log2det_eye_plus(cs.rho * (S_other + gram[l]));
            if (updated < mi - 1e-9) res.monotone = false;
            res.update_mi.push_back(updated);
            mi = updated;
        }
        res.sweep_mi.push_back(mi);
        res.sweeps = j;
        const double gain = (mi - before) / std::max(std::abs(before), std::numeric_limits<double>::min());
        if (gain < opts.rel_tol) break;
    }
    return res;
}

InfoLoss info_loss(const ChannelSet& cs, const FilterBank& fb) {
    check_bank(cs, fb);
    const auto K = cs.K();
    CMat S = CMat::Zero(K, K), S_bar = CMat::Zero(K, K);
    for (int l = 0; l < cs.L(); ++l) {
        const CMat G = fb.W[l].adjoint() * cs.H[l];
        S.noalias() += G.adjoint() * G;
        const CMat Wc = orthonormal_complement(fb.W[l]);
        if (Wc.cols() == 0) continue;
        const CMat G_bar = Wc.adjoint() * cs.H[l];
        S_bar.noalias() += G_bar.adjoint() * G_bar;
    }

    // det(I + X Y^{-1}) with Y = L L^H evaluated as det(I + L^{-1} X L^{-H}).
    auto log2det_ratio = [](const CMat& X, const CMat& Y) {
        Eigen::LLT<CMat> llt(Y);
        if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
        const CMat T = llt.matrixL().solve(X);
        const CMat U = llt.matrixL().solve(T.adjoint());
        return log2det_eye_plus((U + U.adjoint()) / 2.0);
    };

    InfoLoss out;
    out.loss = log2det_ratio(cs.rho * S_bar, CMat::Identity(K, K) + cs.rho * S);
    // The bound needs a full-rank reduced channel.
    const RVec ev = hermitian_eig(S).values;
    if (ev.size() == 0 || ev(ev.size() - 1) <= 1e-12 * std::max(ev(0), 1e-300))
        out.bound = std::numeric_limits<double>::infinity();
    else
        out.bound = log2det_ratio(S_bar, S);
    return out;
}

FilterBank antenna_selection(const ChannelSet& cs, int N) {
    check_channels(cs.H);
    check_reduced_dimension(cs.K(), cs.L(), cs.M(), N);
    const int L = cs.L(), M = cs.M();
    const auto K = cs.K();
    std::vector<std::vector<int>> picks(L);
    std::vector<std::vector<bool>> used(L, std::vector<bool>(M, false));
    CMat S = CMat::Zero(K, K);
    for (int round = 0; round < N; ++round) {
        for (int l = 0; l < L; ++l) {
            Eigen::LLT<CMat> llt(CMat::Identity(K, K) + cs.rho * S);
            int best = -1;
            double best_gain = -std::numeric_limits<double>::infinity();
            for (int m = 0; m < M; ++m) {
                if (used[l][m]) continue;
                // log det(B + rho v v^H) = log det B + log(1 + rho v^H B^{-1} v)
                const CVec v = cs.H[l].row(m).adjoint();
                const double gain = llt.matrixL().solve(v).squaredNorm();
                if (gain > best_gain) {
                    best_gain = gain;
                    best = m;
                }
            }
            used[l][best] = true;
            picks[l].push_back(best);
            const CVec v = cs.H[l].row(best).adjoint();
            S.noalias() += v * v.adjoint();
        }
    }
    return basis_selection(M, picks, N, DrMethod::AntennaSelect);
}

FilterBank antenna_reduce(const ChannelSet& cs, int N) {
    check_channels(cs.H);
    check_reduced_dimension(cs.K(), cs.L(), cs.M(), N);
    std::vector<std::vector<int>> picks(cs.L());
    for (auto& p : picks)
        for (int m = 0; m < N; ++m) p.push_back(m);
    return basis_selection(cs.M(), picks, N, DrMethod::AntennaReduce);
}

FilterBank no_reduction(const ChannelSet& cs) {
    check_channels(cs.H);
    FilterBank fb;
    fb.N = cs.M();
    fb.method = DrMethod::None;
    fb.W.assign(cs.L(), CMat::Identity(cs.M(), cs.M()));
    return fb;
}

CMat high_snr_update_matrix(const std::vector<CMat>& H, const FilterBank& fb, int l) {
    check_channels(H);
    if (fb.W.size() != H.size()) throw InvalidInput("high_snr_update_matrix: filter bank size mismatch");
    if (l < 0 || l >= static_cast<int>(H.size())) throw InvalidInput("high_snr_update_matrix: bad receiver index");
    const CMat S = reduced_gram_sum(H, fb.W, l);
    const RVec ev = hermitian_eig(S).values;
    if (ev(ev.size() - 1) <= 1e-12 * std::max(ev(0), 1e-300))
        throw RankDeficient("high_snr_update_matrix: other receivers span fewer than K dimensions");
    Eigen::LLT<CMat> llt(S);
    const CMat X = llt.matrixL().solve(H[l].adjoint());
    return X.adjoint() * X;
}

FilterBank design_filters(DrMethod method, const ChannelSet& cs, int N, const BcaOptions& opts) {
    switch (method) {
        case DrMethod::TKLT: return tklt_bank(cs, N);
        case DrMethod::TCKLT: return tcklt_bca(cs, N, opts).filters;
        case DrMethod::AntennaSelect: return antenna_selection(cs, N);
        case DrMethod::AntennaReduce: return antenna_reduce(cs, N);
        case DrMethod::None: return no_reduction(cs);
    }
    throw InvalidInput("design_filters: unknown method");
}

}  // namespace fhdr
