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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace fhdr {

// Purpose tags separate the random streams used within one trial, so that
// e.g. changing the pilot SNR never perturbs the fading draw.
enum class StreamTag : std::uint32_t {
    Geometry = 1,
    Fading = 2,
    Pilot = 3,
    Quantizer = 4,
    Test = 99,
};

// A random stream keyed by (seed, trial index, purpose). Any trial can be
// regenerated in isolation from its key.
class RngStream {
   public:
    RngStream(std::uint64_t seed, std::uint64_t trial, StreamTag tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                          static_cast<std::uint32_t>(tag)};
        engine_.seed(seq);
    }

    explicit RngStream(std::uint64_t seed) : RngStream(seed, 0, StreamTag::Test) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double normal() { return normal_(engine_); }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    std::mt19937_64& engine() { return engine_; }

   private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fhdr
