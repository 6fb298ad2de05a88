// Copyright 2026 The gmc-interferometer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gmc/cli.hpp"

#include <cstdio>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

using namespace gmc;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "gmc");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto path = std::filesystem::temp_directory_path() / ("gmc_cli_test_" + name);
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

}  // namespace

TEST(Cli, AnalyticJson) {
    auto r = run({"run", "--builtin", "mach-zehnder", "--engine", "analytic", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["D1"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["D2"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(j.size(), 2u);

    r = run({"run", "--builtin", "ev-bomb", "--engine", "analytic"});
    ASSERT_EQ(r.code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["D3"].get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(j["D1"].get<double>(), 0.25, 1e-12);
    EXPECT_NEAR(j["D2"].get<double>(), 0.25, 1e-12);
    // Sorted keys.
    EXPECT_LT(r.out.find("\"D1\""), r.out.find("\"D2\""));
    EXPECT_LT(r.out.find("\"D2\""), r.out.find("\"D3\""));
}

TEST(Cli, AnalyticCsvAndOpenPorts) {
    auto r = run({"run", "--builtin", "h-detectors", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "outcome,probability");
    const auto f = temp_file("open.gmc", "experiment open\nmodes 2\nsource mode 0\nH 0 1\nDETECT A@0\n");
    r = run({"run", "--file", f.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["UNDETECTED"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, SampleReport) {
    const auto r = run({"run", "--builtin", "h-detectors", "--engine", "sample", "--trials", "100000", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["n_trials"].get<int>(), 100000);
    EXPECT_EQ(j["seed"].get<int>(), 7);
    EXPECT_EQ(j["counts"]["D1"].get<int>() + j["counts"]["D2"].get<int>(), 100000);
    const double bound = 3.0 * std::sqrt(0.25 / 100000.0);
    EXPECT_LT(std::abs(j["frequencies"]["D1"].get<double>() - 0.5), bound);
    EXPECT_LT(std::abs(j["frequencies"]["D2"].get<double>() - 0.5), bound);

    const auto csv = run({"run", "--builtin", "h-detectors", "--engine", "sample", "--trials", "10", "--format", "csv"});
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "outcome,count,frequency,predicted");
}

TEST(Cli, SampleOutputIsByteIdentical) {
    const std::vector<std::string> args{"run", "--builtin", "ev-bomb", "--engine", "sample", "--trials", "30000", "--seed", "9"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run({"run", "--builtin", "ev-bomb", "--engine", "sample", "--trials", "30000", "--seed", "10"}).out);
}

TEST(Cli, ExitCodes) {
    const auto bad = temp_file("bad.gmc", "experiment e\nmodes 2\nsource mode 0\nBADDEV 0 1\n");
    auto r = run({"run", "--file", bad.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find(":4:1: error: unknown keyword"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());

    EXPECT_EQ(run({"run", "--builtin", "nope"}).code, 2);
    EXPECT_EQ(run({"run"}).code, 2);
    EXPECT_EQ(run({"run", "--builtin", "bell", "--file", bad.string()}).code, 2);
    EXPECT_EQ(run({"run", "--file", "/nonexistent/x.gmc"}).code, 2);
    EXPECT_EQ(run({"run", "--builtin", "bell", "--engine", "quantum"}).code, 2);
    EXPECT_EQ(run({"run", "--builtin", "bell", "--engine", "sample", "--trials", "0"}).code, 2);
    EXPECT_EQ(run({"run", "--builtin", "bell", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"compare", "--builtin", "bell", "--alpha", "1.5"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, UnknownBuiltinListsValidNames) {
    const auto r = run({"run", "--builtin", "nope"});
    EXPECT_NE(r.err.find("mach-zehnder"), std::string::npos) << r.err;
}

TEST(Cli, EmitDsl) {
    const auto r = run({"run", "--builtin", "ev-bomb", "--emit-dsl"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "experiment ev_bomb\nmodes 2\nsource mode 0\nH 0 1\nDETECT D3@1\nR 0 1\nH 0 1\nDETECT D1@1 D2@0\n");
}

TEST(Cli, Compare) {
    auto r = run({"compare", "--builtin", "mach-zehnder", "--trials", "10000"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());

    r = run({"compare", "--builtin", "ev-bomb", "--trials", "100000", "--seed", "20261016", "--alpha", "0.001"});
    EXPECT_EQ(r.code, 0) << r.err;

    const auto corrupted = temp_file("pred.json", R"({"D1": 0.1, "D2": 0.4, "D3": 0.5})");
    r = run({"compare", "--builtin", "ev-bomb", "--trials", "100000", "--prediction", corrupted.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(r.out)["pass"].get<bool>());

    const auto broken = temp_file("broken.json", R"({"D1": 0.1)");
    EXPECT_EQ(run({"compare", "--builtin", "ev-bomb", "--prediction", broken.string()}).code, 2);
    const auto unnormalized = temp_file("unnorm.json", R"({"D1": 0.1})");
    EXPECT_EQ(run({"compare", "--builtin", "ev-bomb", "--prediction", unnormalized.string()}).code, 2);
}

TEST(Cli, ScanPhase) {
    auto r = run({"scan", "--builtin", "mach-zehnder", "--stage", "3", "--points", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    const double expected_d2[] = {1.0, 0.5, 0.0, 0.5};
    ASSERT_EQ(j["points"].size(), 4u);
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(j["points"][k]["phi"].get<double>(), k * std::numbers::pi / 2.0, 1e-15);
        EXPECT_NEAR(j["points"][k]["distribution"]["D2"].get<double>(), expected_d2[k], 1e-12);
    }

    r = run({"scan", "--builtin", "mach-zehnder", "--stage", "3", "--points", "2", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\n0.0,D2,1.0\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\n3.1415926535897931,D1,1.0\n"), std::string::npos) << r.out;

    // An existing PHASE stage is reused rather than duplicated.
    const auto with_phase = temp_file(
        "phase.gmc", "experiment p\nmodes 2\nsource mode 0\nH 0 1\nR 0 1\nPHASE 1 phi=2.0\nH 0 1\nDETECT D2@0 D1@1\n");
    r = run({"scan", "--file", with_phase.string(), "--stage", "3", "--points", "4"});
    j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["points"][2]["distribution"]["D2"].get<double>(), 0.0, 1e-12);

    const auto flat = temp_file("flat.gmc", "experiment f\nmodes 2\nsource mode 0\nX 0 1\nDETECT A@0 B@1\n");
    r = run({"scan", "--file", flat.string(), "--stage", "2", "--points", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
    j = nlohmann::json::parse(r.out);
    for (const auto &p : j["points"]) {
        EXPECT_NEAR(p["distribution"]["A"].get<double>(), 1.0, 1e-12);
    }

    EXPECT_EQ(run({"scan", "--builtin", "mach-zehnder", "--stage", "9", "--points", "4"}).code, 2);
    EXPECT_EQ(run({"scan", "--builtin", "mach-zehnder", "--stage", "0", "--points", "4"}).code, 2);
    EXPECT_EQ(run({"scan", "--builtin", "mach-zehnder", "--stage", "2", "--points", "1"}).code, 2);
}

TEST(Cli, CustomOperatorWarning) {
    const auto f = temp_file("lossy.gmc", "experiment l\nmodes 2\nsource mode 0\nOP 0 1 (0.5,0) (0,0) (0,0) (1,0)\nDETECT A@0\n");
    const auto r = run({"run", "--file", f.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("not unitary"), std::string::npos) << r.err;
}
