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

#include "fhdr/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

namespace fhdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBracketSteps = 64;

// Internal bisection tolerance; tighter than the 1e-9 bpcu contract.
constexpr double kDeltaTol = 1e-10;

}  // namespace

double quantizer_noise_variance(double sigma2, double rate) {
    if (!(rate > 0.0)) return kInf;
    return sigma2 / std::expm1(rate * std::numbers::ln2);
}

bool ReceiverPlan::has_erasures() const { return (noise_var.array() == kInf).any(); }

CMat ReceiverPlan::phi() const {
    RVec d = noise_var;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        if (std::isinf(d(i))) d(i) = 0.0;
    return V * d.cast<cplx>().asDiagonal() * V.adjoint();
}

CMat ReceiverPlan::inv_one_plus_phi() const {
    RVec w(noise_var.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::isinf(noise_var(i)) ? 0.0 : 1.0 / (1.0 + noise_var(i));
    return V * w.cast<cplx>().asDiagonal() * V.adjoint();
}

RVec CompressionPlan::deltas() const {
    RVec d(static_cast<Eigen::Index>(receivers.size()));
    for (std::size_t l = 0; l < receivers.size(); ++l) d(static_cast<Eigen::Index>(l)) = receivers[l].delta;
    return d;
}

double uqn_rate(const RVec& sigma2, double delta) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < sigma2.size(); ++i) r += std::log1p(sigma2(i) / delta);
    return r / std::numbers::ln2;
}

double solve_uqn_delta(const RVec& sigma2, double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidInput("solve_uqn_delta: R must be positive and finite");
    if (sigma2.size() == 0 || !(sigma2.minCoeff() > 0.0))
        throw InvalidInput("solve_uqn_delta: component variances must be positive");
    auto f = [&](double d) { return uqn_rate(sigma2, d); };

    double lo = 1e-12;
    double hi = sigma2.sum() * std::exp2(std::min(R, 1000.0));
    for (int step = 0; step < kBracketSteps && f(hi) > R; ++step) hi *= 2.0;
    for (int step = 0; step < kBracketSteps && f(lo) < R; ++step) lo *= 0.5;
    return bisect_monotone(f, R, lo, hi, kDeltaTol);
}

RVec component_variances(const ReducedChannelSet& rcs, int l) {
    return (rcs.rho * rcs.eig.at(l).values.array() + 1.0).matrix();
}

double solve_uqn_delta(const ReducedChannelSet& rcs, int l, double R) {
    return solve_uqn_delta(component_variances(rcs, l), R);
}

RVec exact_rate_allocation(const RVec& sigma2, double delta) {
    RVec r(sigma2.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = std::log1p(sigma2(i) / delta) / std::numbers::ln2;
    return r;
}

ApproxAllocation approx_rate_allocation(const RVec& gammas, double R) {
    const Eigen::Index n = gammas.size();
    ApproxAllocation out;
    out.rates = RVec::Zero(n);
    std::vector<bool> active(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        active[i] = gammas(i) > 0.0;
        if (!active[i]) out.clamped = true;
    }
    for (;;) {
        int count = 0;
        double log_sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[i]) {
                ++count;
                log_sum += std::log2(gammas(i));
            }
        if (count == 0) return out;
        const double mean = log_sum / count;
        bool negative = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!active[i]) continue;
            const double r = R / count + std::log2(gammas(i)) - mean;
            out.rates(i) = r;
            negative = negative || r < 0.0;
        }
        if (!negative) return out;
        // Removing negative-rate components only raises the others, so they
        // can all be dropped in one pass.
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[i] && out.rates(i) < 0.0) {
                active[i] = false;
                out.rates(i) = 0.0;
            }
        out.clamped = true;
    }
}

CompressionPlan plan_uqn(const ReducedChannelSet& rcs, double R) {
    CompressionPlan plan;
    plan.R = R;
    for (int l = 0; l < rcs.L(); ++l) {
        ReceiverPlan rp;
        rp.sigma2 = component_variances(rcs, l);
        rp.delta = solve_uqn_delta(rp.sigma2, R);
        rp.V = rcs.eig[l].vectors;
        rp.rates = exact_rate_allocation(rp.sigma2, rp.delta);
        rp.noise_var.resize(rp.rates.size());
        for (Eigen::Index i = 0; i < rp.rates.size(); ++i) rp.noise_var(i) = quantizer_noise_variance(rp.sigma2(i), rp.rates(i));
        plan.receivers.push_back(std::move(rp));
    }
    return plan;
}

CVec quantize_gaussian_model(const CVec& z, const CompressionPlan& plan, int l, RngStream& rng) {
    const ReceiverPlan& rp = plan.receivers.at(l);
    if (z.size() != rp.V.rows()) throw InvalidInput("quantize_gaussian_model: dimension mismatch");
    CVec u = rp.V.adjoint() * z;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const cplx noise = rng.complex_normal(1.0);
        if (std::isinf(rp.noise_var(i)))
            u(i) = 0.0;
        else
            u(i) += std::sqrt(rp.noise_var(i)) * noise;
    }
    return rp.V * u;
}

CMat imperfect_quant_covariance(const CMat& V, const RVec& rates, const RVec& sigma2) {
    if (rates.size() != V.cols() || sigma2.size() != V.cols())
        throw InvalidInput("imperfect_quant_covariance: dimension mismatch");
    RVec d(rates.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double nv = quantizer_noise_variance(sigma2(i), rates(i));
        d(i) = std::isinf(nv) ? 0.0 : nv;
    }
    return V * d.cast<cplx>().asDiagonal() * V.adjoint();
}

// ---------------------------------------------------------------- Lloyd-Max

namespace {

struct BinMoments {
    double p, m1, m2;  // P(bin), E[X; bin], E[X^2; bin] for X ~ N(0, 1)
};

double std_pdf(double x) { return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double std_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

BinMoments moments(double a, double b) {
    const double pa = std_pdf(a), pb = std_pdf(b);
    const double p = std_cdf(b) - std_cdf(a);
    const double apa = std::isinf(a) ? 0.0 : a * pa;
    const double bpb = std::isinf(b) ? 0.0 : b * pb;
    return {p, pa - pb, p + apa - bpb};
}

double unit_mse(const std::vector<double>& levels, const std::vector<double>& thresholds) {
    double mse = 0.0;
    const std::size_t n = levels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i == 0 ? -kInf : thresholds[i - 1];
        const double b = i + 1 == n ? kInf : thresholds[i];
        const BinMoments m = moments(a, b);
        const double c = levels[i];
        mse += m.m2 - 2.0 * c * m.m1 + c * c * m.p;
    }
    return mse;
}

}  // namespace

LloydMaxCodebook lloyd_max_codebook(int rate_bits, double variance) {
    if (rate_bits < 1 || rate_bits > 8) throw InvalidInput("lloyd_max_codebook: rate_bits must be in [1, 8]");
    if (!(variance > 0.0)) throw InvalidInput("lloyd_max_codebook: variance must be positive");
    const std::size_t n = std::size_t{1} << rate_bits;

    // Start from the Gaussian quantiles at bin centres.
    boost::math::normal_distribution<double> unit;
    std::vector<double> levels(n), thresholds(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        levels[i] = boost::math::quantile(unit, (static_cast<double>(i) + 0.5) / static_cast<double>(n));

    double mse = kInf;
    int it = 0;
    constexpr int kMaxIter = 2'000'000;
    for (; it < kMaxIter; ++it) {
        for (std::size_t i = 0; i + 1 < n; ++i) thresholds[i] = 0.5 * (levels[i] + levels[i + 1]);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = i == 0 ? -kInf : thresholds[i - 1];
            const double b = i + 1 == n ? kInf : thresholds[i];
            const BinMoments m = moments(a, b);
            if (m.p > 0.0) levels[i] = m.m1 / m.p;
        }
        const double next = unit_mse(levels, thresholds);
        const bool done = std::abs(mse - next) < 1e-10 * next;
        mse = next;
        if (done) break;
    }
    if (it == kMaxIter) throw ConvergenceError("lloyd_max_codebook: Lloyd iteration did not converge");
    for (std::size_t i = 0; i + 1 < n; ++i) thresholds[i] = 0.5 * (levels[i] + levels[i + 1]);

    LloydMaxCodebook cb;
    cb.bits = rate_bits;
    cb.variance = variance;
    cb.iterations = it + 1;
    const double s = std::sqrt(variance);
    cb.mse = unit_mse(levels, thresholds) * variance;
    for (auto& v : levels) v *= s;
    for (auto& t : thresholds) t *= s;
    cb.levels = std::move(levels);
    cb.thresholds = std::move(thresholds);
    return cb;
}

double LloydMaxCodebook::quantize(double x) const {
    const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
    return levels[static_cast<std::size_t>(it - thresholds.begin())];
}

cplx LloydMaxCodebook::quantize(cplx z) const { return {quantize(z.real()), quantize(z.imag())}; }

double gaussian_distortion_rate(double variance, double rate_bits) { return variance * std::exp2(-2.0 * rate_bits); }

}  // namespace fhdr
