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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfsense/scenario.hpp"

namespace dfsense {

struct RunOptions {
    std::string output_dir = "out";
    std::size_t threads = 1;
    bool timestamp = true;
};

std::vector<std::string> subcommands();

/// Runs one subcommand, writes its artifacts under options.output_dir and
/// prints one summary line per result to `log`. Throws Error on failure.
void run(const std::string &subcommand, const ScenarioConfig &config, const RunOptions &options, std::ostream &log);

}  // namespace dfsense
