// Copyright 2026 The dfsense Authors
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

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dfsense/runner.hpp"
#include "dfsense/scenario.hpp"
#include "dfsense/serialize.hpp"

using namespace dfsense;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("dfsense_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string &args, std::string *stderr_text = nullptr) {
    fs::path err = fs::temp_directory_path() / "dfsense_test_stderr.txt";
    std::string cmd = std::string(DFSENSE_CLI) + " " + args + " > /dev/null 2> " + err.string();
    int status = std::system(cmd.c_str());
    if (stderr_text) *stderr_text = slurp(err);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, PaperPresetConstants) {
    auto c = preset("paper-experiment");
    EXPECT_NEAR(c.kappa, 2 * M_PI * 0.0168, 1e-15);
    EXPECT_DOUBLE_EQ(c.spacing, 4.9);
    EXPECT_DOUBLE_EQ(c.time, 0.08);
    EXPECT_DOUBLE_EQ(c.amplitude_swd, 0.45);
    EXPECT_DOUBLE_EQ(c.amplitude_separable, 0.146);
    EXPECT_DOUBLE_EQ(c.window, 0.73);
    EXPECT_EQ(c.shots, 72u);
    EXPECT_EQ(c.signals, (std::vector<double>{0.0, 2.1, 4.7, 7.6, 9.5, 11.9, 15.2}));
    EXPECT_NEAR(c.frequency(), 0.405510, 1e-6);
    auto via_json = load_config_text(R"({"preset": "paper-experiment"})");
    EXPECT_EQ(config_to_json(via_json), config_to_json(c));
}

TEST(Config, Errors) {
    EXPECT_THROW(load_config_text(""), ConfigError);
    EXPECT_THROW(load_config_text("[1, 2]"), ConfigError);
    try {
        load_config_text(R"({"shots": 0})");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("N must be >= 1"), std::string::npos) << e.what();
    }
    try {
        load_config_text(R"({"shotz": 3})");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("shotz"), std::string::npos);
    }
    EXPECT_THROW(load_config_text(R"({"optimizer": {"restartz": 1}})"), ConfigError);
    EXPECT_THROW(load_config_text(R"({"preset": "nope"})"), ConfigError);
    EXPECT_THROW(load_config_text(R"({"noise": [{"kind": "poly", "order": -1}]})"), ConfigError);
    EXPECT_THROW(load_config(scratch("missing").string() + "/none.json"), ConfigError);
}

TEST(Config, JsonRoundTripAndHash) {
    auto c = load_config_text(R"({
        "preset": "smoke",
        "levels": "d52",
        "noise": [{"kind": "poly", "order": 0}, {"kind": "table", "samples": [-1, 0, 1], "strength": 2}],
        "signal": {"kind": "poly", "order": 2, "strength": 1},
        "noise_models": [{"kind": "gaussian", "width": 3}, {"kind": "overwhelming"}],
        "seed": 17
    })");
    EXPECT_EQ(c.noise_fields.size(), 2u);
    EXPECT_EQ(c.noise_fields[1].kind(), FieldComponent::Kind::Tabulated);
    auto again = load_config_text(config_to_json(c));
    EXPECT_EQ(config_to_json(again), config_to_json(c));
    EXPECT_EQ(config_hash(again), config_hash(c));
    EXPECT_EQ(config_hash(c).size(), 16u);
    c.seed = 18;
    EXPECT_NE(config_hash(again), config_hash(c));
}

TEST(Serialize, ResultFilesReload) {
    CampaignConfig cc;
    cc.signals = {0.0, 2.1};
    cc.phase_grid = linear_grid(1.6 * M_PI, 60);
    cc.repeats = 20;
    auto res = run_campaign(ParityModel{0.45, 0.4055, 0, 0}, cc);
    auto dir = scratch("serialize");
    write_json_file((dir / "c.json").string(), Json(res));
    auto back = read_json_file((dir / "c.json").string()).get<CampaignResult>();
    EXPECT_EQ(back.average_rmse, res.average_rmse);
    EXPECT_EQ(back.signals[1].estimates, res.signals[1].estimates);
    EXPECT_EQ(back.signals[0].histogram.counts, res.signals[0].histogram.counts);

    CMatrix m(2, 2);
    m << Complex(0.5, 0), Complex(0.1, -0.2), Complex(0.1, 0.2), Complex(0.5, 0);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
}

TEST(Runner, DfsOnFullManifoldReportsCensus) {
    auto dir = scratch("dfs");
    RunOptions o{dir.string(), 1, false};
    std::ostringstream log;
    run("dfs", preset("full-manifold"), o, log);
    EXPECT_NE(log.str().find("68 DFSs, 32 maximal"), std::string::npos) << log.str();
    EXPECT_TRUE(fs::exists(dir / "dfs.csv"));
    auto j = read_json_file((dir / "dfs.json").string());
    EXPECT_EQ(j.at("subspaces").size(), 68u);
}

TEST(Runner, BoundsLines) {
    auto dir = scratch("bounds");
    RunOptions o{dir.string(), 1, false};
    std::ostringstream log;
    run("bounds", preset("paper-experiment"), o, log);
    auto j = read_json_file((dir / "bounds.json").string());
    EXPECT_NEAR(j.at("rmse_heisenberg").get<double>(), 2.462, 0.025);
    EXPECT_NEAR(j.at("rmse_separable_two_level").get<double>(), 9.847, 0.1);
    EXPECT_NEAR(j.at("rmse_six_level_optimized").get<double>(), 5.42, 0.055);
}

TEST(Cli, SmokeRunsAreReproducible) {
    for (const std::string sub : {"dfs", "bounds", "simulate", "optimize", "tomography", "calibrate", "sweep"}) {
        // The output directory is part of the recorded config, so both runs use the same one.
        auto a = scratch("cli_" + sub), b = scratch("cli_first_" + sub);
        ASSERT_EQ(cli("--preset smoke --no-timestamp --out " + a.string() + " " + sub), 0) << sub;
        fs::remove_all(b);
        fs::rename(a, b);
        ASSERT_EQ(cli("--preset smoke --no-timestamp --threads 2 --out " + a.string() + " " + sub), 0) << sub;
        std::size_t files = 0;
        for (auto &e : fs::directory_iterator(a)) {
            ++files;
            EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << sub << " " << e.path().filename();
        }
        EXPECT_GT(files, 0u) << sub;
    }
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("cli_err");
    std::string err;
    EXPECT_EQ(cli("--preset nope --out " + dir.string() + " dfs", &err), 2);
    EXPECT_NE(err.find("\"error\""), std::string::npos);
    {
        std::ofstream(dir / "empty.json") << "";
    }
    EXPECT_EQ(cli("--config " + (dir / "empty.json").string() + " --out " + dir.string() + " dfs"), 2);
    {
        std::ofstream(dir / "zero.json") << R"({"shots": 0})";
    }
    EXPECT_EQ(cli("--config " + (dir / "zero.json").string() + " --out " + dir.string() + " simulate", &err), 2);
    EXPECT_NE(err.find("N must be >= 1"), std::string::npos);
    {
        // Constant+gradient+quadratic noise on three sensors leaves no DFS with signal range.
        std::ofstream(dir / "nodfs.json")
            << R"({"noise": [{"kind": "poly", "order": 0}, {"kind": "poly", "order": 1}, {"kind": "poly", "order": 2}]})";
    }
    EXPECT_EQ(cli("--config " + (dir / "nodfs.json").string() + " --out " + dir.string() + " bounds"), 3);
    EXPECT_NE(cli("--out " + dir.string()), 0);
}
