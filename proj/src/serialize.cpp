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

#include "dfsense/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dfsense {

Json matrix_to_json(const CMatrix &m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json rr = Json::array(), ii = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ii.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    return {{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json &j) {
    auto re = j.at("re").get<std::vector<std::vector<double>>>();
    auto im = j.at("im").get<std::vector<std::vector<double>>>();
    require(re.size() == im.size(), "matrix JSON: real and imaginary parts differ in shape");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        require(static_cast<Eigen::Index>(re[r].size()) == cols && im[r].size() == re[r].size(),
                "matrix JSON: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = Complex(re[r][c], im[r][c]);
        }
    }
    return m;
}

void to_json(Json &j, const ParityModel &m) {
    j = {{"amplitude", m.amplitude}, {"frequency", m.frequency}, {"analysis_phase", m.analysis_phase},
         {"offset", m.offset}};
}

void from_json(const Json &j, ParityModel &m) {
    j.at("amplitude").get_to(m.amplitude);
    j.at("frequency").get_to(m.frequency);
    j.at("analysis_phase").get_to(m.analysis_phase);
    j.at("offset").get_to(m.offset);
}

void to_json(Json &j, const Histogram &h) {
    j = {{"low", h.low}, {"high", h.high}, {"counts", h.counts}, {"underflow", h.underflow}, {"overflow", h.overflow}};
}

void from_json(const Json &j, Histogram &h) {
    j.at("low").get_to(h.low);
    j.at("high").get_to(h.high);
    j.at("counts").get_to(h.counts);
    j.at("underflow").get_to(h.underflow);
    j.at("overflow").get_to(h.overflow);
}

void to_json(Json &j, const SignalResult &r) {
    j = {{"truth", r.truth},     {"phases", r.phases},   {"estimates", r.estimates}, {"mean", r.mean},
         {"mean_se", r.mean_se}, {"rmse", r.rmse},       {"rmse_se", r.rmse_se},     {"histogram", r.histogram}};
}

void from_json(const Json &j, SignalResult &r) {
    j.at("truth").get_to(r.truth);
    j.at("phases").get_to(r.phases);
    j.at("estimates").get_to(r.estimates);
    j.at("mean").get_to(r.mean);
    j.at("mean_se").get_to(r.mean_se);
    j.at("rmse").get_to(r.rmse);
    j.at("rmse_se").get_to(r.rmse_se);
    j.at("histogram").get_to(r.histogram);
}

void to_json(Json &j, const CampaignResult &r) {
    j = {{"model", r.model},
         {"shots", r.shots},
         {"signals", r.signals},
         {"average_rmse", r.average_rmse},
         {"average_rmse_se", r.average_rmse_se}};
}

void from_json(const Json &j, CampaignResult &r) {
    j.at("model").get_to(r.model);
    j.at("shots").get_to(r.shots);
    j.at("signals").get_to(r.signals);
    j.at("average_rmse").get_to(r.average_rmse);
    j.at("average_rmse_se").get_to(r.average_rmse_se);
}

void to_json(Json &j, const ScalingRow &r) {
    j = {{"shots", r.shots},
         {"rmse", r.rmse},
         {"rmse_se", r.rmse_se},
         {"improvement_db", r.improvement_db},
         {"improvement_db_se", r.improvement_db_se}};
}

void from_json(const Json &j, ScalingRow &r) {
    j.at("shots").get_to(r.shots);
    j.at("rmse").get_to(r.rmse);
    j.at("rmse_se").get_to(r.rmse_se);
    j.at("improvement_db").get_to(r.improvement_db);
    j.at("improvement_db_se").get_to(r.improvement_db_se);
}

void to_json(Json &j, const RestartLog &r) {
    j = {{"index", r.index},
         {"value", r.value},
         {"evaluations", r.evaluations},
         {"cycles", r.cycles},
         {"converged", r.converged},
         {"params", r.params}};
}

void from_json(const Json &j, RestartLog &r) {
    j.at("index").get_to(r.index);
    j.at("value").get_to(r.value);
    j.at("evaluations").get_to(r.evaluations);
    j.at("cycles").get_to(r.cycles);
    j.at("converged").get_to(r.converged);
    j.at("params").get_to(r.params);
}

void to_json(Json &j, const OptimizeResult &r) {
    j = {{"params", r.params}, {"best", r.best}, {"best_restart", r.best_restart}, {"restarts", r.restarts}};
}

void from_json(const Json &j, OptimizeResult &r) {
    j.at("params").get_to(r.params);
    j.at("best").get_to(r.best);
    j.at("best_restart").get_to(r.best_restart);
    j.at("restarts").get_to(r.restarts);
}

void write_json_file(const std::string &path, const Json &doc) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot read '" + path + "'");
    return Json::parse(in);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    require(columns_ > 0, "CSV header must not be empty");
    row(header);
}

void CsvWriter::row(const std::vector<std::string> &cells) {
    require(cells.size() == columns_, "CSV row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            text_ += ',';
        }
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot write '" + path + "'");
    out << text_;
}

std::string CsvWriter::num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvWriter::num(std::uint64_t v) { return std::to_string(v); }

}  // namespace dfsense
