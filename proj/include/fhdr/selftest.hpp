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
#include <iosfwd>

namespace fhdr {

struct SelftestSummary {
    int passed = 0;
    int failed = 0;
};

/// Randomised invariant suites (eigen reconstruction, chain rule, T-KLT
/// optimality against random filters, BCA monotonicity, delta residuals,
/// Lloyd-Max reference values). One line per suite is printed to os.
SelftestSummary run_selftest(std::ostream& os, int instances = 200, std::uint64_t seed = 7);

}  // namespace fhdr
