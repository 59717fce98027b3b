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

// Runs the fhdr binary as a subprocess.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#ifndef FHDR_BIN
#error "FHDR_BIN must point at the fhdr executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout and stderr
};

Run fhdr(const std::string& args) {
    const std::string cmd = std::string(FHDR_BIN) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("fhdr_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kSmall = "--trials 3 --overrides rate_grid=[5,20] N_policy=[2,4]";

}  // namespace

TEST_CASE("sweep writes the CSV, plot descriptor and manifest") {
    const fs::path d = scratch("sweep");
    const Run r = fhdr(std::string("sweep ") + kSmall + " scenario.rho_db=25 --output-dir " + d.string());
    REQUIRE(r.code == 0);
    const std::string csv = slurp(d / "fig2.csv");
    CHECK(csv.rfind("method,R,N_used,rho_db,rho_pl_db,mean_sum_capacity,", 0) == 0);
    CHECK(csv.find(",25,") != std::string::npos);
    CHECK(fs::exists(d / "fig2.plot.json"));
    const auto m = nlohmann::json::parse(slurp(d / "manifest.jsonl"));
    CHECK(m["subcommand"] == "sweep");
    CHECK(m["config"]["scenario"]["rho_db"] == 25.0);
    CHECK(m["config"]["trials"] == 3);
    CHECK(m.contains("version"));
    CHECK(m.contains("wall_time_s"));
    CHECK(m["summary"]["failed_trials"] == 0);
}

TEST_CASE("worker count does not change the output, reruns overwrite") {
    const fs::path a = scratch("w1"), b = scratch("w8");
    REQUIRE(fhdr(std::string("sweep -q ") + kSmall + " --workers 1 --output-dir " + a.string()).code == 0);
    REQUIRE(fhdr(std::string("sweep -q ") + kSmall + " --workers 8 --output-dir " + b.string()).code == 0);
    CHECK(slurp(a / "fig2.csv") == slurp(b / "fig2.csv"));
    const std::string first = slurp(a / "fig2.csv");
    REQUIRE(fhdr(std::string("sweep -q ") + kSmall + " --output-dir " + a.string()).code == 0);
    CHECK(slurp(a / "fig2.csv") == first);
    // one manifest line per run
    std::ifstream in(a / "manifest.jsonl");
    int lines = 0;
    for (std::string s; std::getline(in, s);) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("seed flag changes the draws") {
    const fs::path a = scratch("s1"), b = scratch("s2");
    REQUIRE(fhdr(std::string("sweep -q ") + kSmall + " --output-dir " + a.string()).code == 0);
    REQUIRE(fhdr(std::string("sweep -q ") + kSmall + " --seed 9 --output-dir " + b.string()).code == 0);
    CHECK(slurp(a / "fig2.csv") != slurp(b / "fig2.csv"));
}

TEST_CASE("each subcommand produces its figure") {
    const fs::path d = scratch("all");
    const std::string common = " -q --trials 2 --output-dir " + d.string();
    CHECK(fhdr("converge --overrides N_policy=[2] convergence_sweeps=4" + common).code == 0);
    CHECK(fs::exists(d / "fig3.csv"));
    CHECK(fhdr("snr-scaling --overrides N_policy=[2] rho_db_grid=[0,10]" + common).code == 0);
    CHECK(fs::exists(d / "fig4.csv"));
    CHECK(fhdr("compare-dr --overrides N_policy=[2] rate_grid=[10] methods=[TCKLT,TKLT]" + common).code == 0);
    CHECK(fs::exists(d / "fig8.csv"));
    CHECK(fhdr("sweep --overrides N_policy=[2] rate_grid=[10] detection=LMMSE" + common).code == 0);
    CHECK(fs::exists(d / "fig9.csv"));
    CHECK(fhdr("imperfect-csi --overrides N_policy=[2] rate_grid=[10] methods=[TCKLT]" + common).code == 0);
    CHECK(fs::exists(d / "fig10.csv"));
}

TEST_CASE("configuration errors exit with code 2 and name the key") {
    const fs::path d = scratch("err");
    Run r = fhdr("sweep --overrides scenario.bogus=1 --output-dir " + d.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("scenario.bogus") != std::string::npos);

    const fs::path cfg = d / "bad.yaml";
    std::ofstream(cfg) << "trials: 4\nmystery: true\n";
    r = fhdr("sweep --config " + cfg.string() + " --output-dir " + d.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("mystery") != std::string::npos);
    CHECK(r.out.find("line 2") != std::string::npos);

    CHECK(fhdr("sweep --trials 0 --output-dir " + d.string()).code == 2);
    CHECK(fhdr("frobnicate").code == 2);
    CHECK(fhdr("sweep --config /nonexistent/x.yaml").code == 2);
}

TEST_CASE("selftest passes") {
    const Run r = fhdr("selftest");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
}
