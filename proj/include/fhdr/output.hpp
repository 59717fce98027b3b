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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fhdr/harness.hpp"

namespace fhdr {

/// Build version, git-describe style.
std::string version_string();

/// Config echo. Infinite pilot SNRs are written as the string "inf".
nlohmann::json config_to_json(const ExperimentConfig& cfg);

nlohmann::json counters_to_json(const RunCounters& c);

/// Append one compact JSON object as a line to path.
void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record);

/// Declarative plot description for a figure CSV: axes, series grouping
/// and filters, with no plotting-tool specifics.
nlohmann::json plot_descriptor(const std::string& figure, const std::string& csv_name);

/// Write text to path, replacing it.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fhdr
