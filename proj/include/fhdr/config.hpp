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

#include <string>
#include <vector>

#include "fhdr/harness.hpp"

namespace fhdr {

// YAML experiment configuration. Keys mirror ExperimentConfig field names;
// scenario fields nest under "scenario". Unknown keys are rejected.
//
//   scenario: {K: 8, L: 4, M: 8, rho_db: 15, seed: 1}
//   rate_grid: [5, 10, 15]
//   N_policy: auto        # or 4, or [2, 4, 8]
//   methods: [TCKLT, NONE]
//   rho_pl_db: [0, 10, inf]

/// Every accepted dotted key, in documentation order.
const std::vector<std::string>& config_keys();

/// Parse YAML text, apply "dotted.key=value" overrides, then validate.
/// Throws ConfigError carrying the key and, when known, the source line.
ExperimentConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides = {});

/// Same, reading the file at path. An empty path means all defaults.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace fhdr
