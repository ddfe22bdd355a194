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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dfsense/runner.hpp"
#include "dfsense/scenario.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

void report(const std::string &kind, const std::string &message) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Distributed sensing in correlated noise: DFS census, bounds and Monte Carlo"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::size_t threads = 1;
    bool no_timestamp = false;

    app.add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
    app.add_option("--preset", preset_name, "Named scenario preset (paper-experiment, full-manifold, smoke)");
    app.add_option("--seed", seed, "Master RNG seed (overrides the config)");
    app.add_option("--out", out, "Output directory (overrides the config)");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp from JSON summaries");

    for (const auto &name : dfsense::subcommands()) {
        app.add_subcommand(name, "Run the '" + name + "' study");
    }
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    dfsense::ScenarioConfig config;
    try {
        if (!config_path.empty()) {
            config = dfsense::load_config(config_path);
            if (!preset_name.empty()) {
                throw dfsense::ConfigError("--preset and --config are mutually exclusive; use \"preset\" inside the file");
            }
        } else {
            config = dfsense::preset(preset_name.empty() ? "paper-experiment" : preset_name);
        }
        if (seed) {
            config.seed = *seed;
        }
        if (out) {
            config.output = *out;
        }
        config.validate();
    } catch (const dfsense::ConfigError &e) {
        report("config", e.what());
        return kConfigError;
    } catch (const dfsense::Error &e) {
        report("config", e.what());
        return kConfigError;
    }

    dfsense::RunOptions options;
    options.output_dir = config.output;
    options.threads = threads;
    options.timestamp = !no_timestamp;
    try {
        dfsense::run(app.get_subcommands().front()->get_name(), config, options, std::cout);
    } catch (const std::exception &e) {
        report("runtime", e.what());
        return kRuntimeError;
    }
    return 0;
}
