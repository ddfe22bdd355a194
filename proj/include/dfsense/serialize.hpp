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

#include <string>
#include <vector>

#include "json.hpp"

#include "dfsense/estimation.hpp"
#include "dfsense/optimize.hpp"
#include "dfsense/types.hpp"

namespace dfsense {

using Json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}, row-major.
Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);

void to_json(Json &j, const ParityModel &m);
void from_json(const Json &j, ParityModel &m);
void to_json(Json &j, const Histogram &h);
void from_json(const Json &j, Histogram &h);
void to_json(Json &j, const SignalResult &r);
void from_json(const Json &j, SignalResult &r);
void to_json(Json &j, const CampaignResult &r);
void from_json(const Json &j, CampaignResult &r);
void to_json(Json &j, const ScalingRow &r);
void from_json(const Json &j, ScalingRow &r);
void to_json(Json &j, const RestartLog &r);
void from_json(const Json &j, RestartLog &r);
void to_json(Json &j, const OptimizeResult &r);
void from_json(const Json &j, OptimizeResult &r);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const std::string &path, const Json &doc);
Json read_json_file(const std::string &path);

/// Comma-separated writer with LF line endings and '.' decimals. Doubles use
/// 17 significant digits.
class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string> &cells);
    std::string str() const { return text_; }
    void save(const std::string &path) const;

    static std::string num(double v);
    static std::string num(std::uint64_t v);

   private:
    std::size_t columns_;
    std::string text_;
};

}  // namespace dfsense
