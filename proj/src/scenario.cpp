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

#include "dfsense/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dfsense {

using nlohmann::json;

namespace {

void check(bool ok, const std::string &message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

template <class T>
T read(const json &j, const std::string &field) {
    try {
        return j.get<T>();
    } catch (const json::exception &) {
        throw ConfigError("field '" + field + "' has the wrong type");
    }
}

using Handler = std::function<void(const json &)>;

void dispatch(const json &j, const std::string &section, const std::map<std::string, Handler> &handlers) {
    check(j.is_object(), "'" + section + "' must be a JSON object");
    for (const auto &[key, value] : j.items()) {
        auto it = handlers.find(key);
        check(it != handlers.end(), "unknown key '" + key + "' in " + section);
        it->second(value);
    }
}

IntegratedNoise parse_noise_model(const json &j) {
    std::string kind = "overwhelming";
    double width = 0.0;
    dispatch(j, "noise_models entry",
             {{"kind", [&](const json &v) { kind = read<std::string>(v, "noise_models.kind"); }},
              {"width", [&](const json &v) { width = read<double>(v, "noise_models.width"); }}});
    check(width >= 0.0, "noise_models.width must be >= 0");
    if (kind == "gaussian") {
        return IntegratedNoise::gaussian(width);
    }
    if (kind == "uniform") {
        return IntegratedNoise::uniform(width);
    }
    check(kind == "overwhelming", "noise_models.kind must be gaussian, uniform or overwhelming");
    return IntegratedNoise::overwhelming();
}

FieldComponent parse_field(const json &j, const std::string &field) {
    std::string kind = "poly";
    int order = 0;
    double strength = 1.0;
    std::vector<double> samples;
    dispatch(j, field,
             {{"kind", [&](const json &v) { kind = read<std::string>(v, field + ".kind"); }},
              {"order", [&](const json &v) { order = read<int>(v, field + ".order"); }},
              {"strength", [&](const json &v) { strength = read<double>(v, field + ".strength"); }},
              {"samples", [&](const json &v) { samples = read<std::vector<double>>(v, field + ".samples"); }}});
    try {
        if (kind == "poly") {
            return FieldComponent::polynomial(order, strength);
        }
        check(kind == "table", field + ".kind must be poly or table");
        return FieldComponent::tabulated(samples, strength);
    } catch (const ConfigError &) {
        throw;
    } catch (const Error &e) {
        throw ConfigError(field + ": " + e.what());
    }
}

json field_json(const FieldComponent &f) {
    if (f.kind() == FieldComponent::Kind::Polynomial) {
        return {{"kind", "poly"}, {"order", f.order()}, {"strength", f.strength()}};
    }
    return {{"kind", "table"}, {"samples", f.samples()}, {"strength", f.strength()}};
}

json noise_model_json(const IntegratedNoise &m) {
    switch (m.kind) {
        case IntegratedNoise::Kind::Gaussian:
            return {{"kind", "gaussian"}, {"width", m.width}};
        case IntegratedNoise::Kind::Uniform:
            return {{"kind", "uniform"}, {"width", m.width}};
        case IntegratedNoise::Kind::Overwhelming:
            break;
    }
    return {{"kind", "overwhelming"}};
}

void apply_overrides(ScenarioConfig &c, const json &j) {
    std::map<std::string, Handler> h{
        {"preset", [](const json &) {}},
        {"name", [&](const json &v) { c.name = read<std::string>(v, "name"); }},
        {"kappa", [&](const json &v) { c.kappa = read<double>(v, "kappa"); }},
        {"time", [&](const json &v) { c.time = read<double>(v, "time"); }},
        {"spacing", [&](const json &v) { c.spacing = read<double>(v, "spacing"); }},
        {"sensors", [&](const json &v) { c.sensors = read<std::size_t>(v, "sensors"); }},
        {"levels", [&](const json &v) { c.levels = read<std::string>(v, "levels"); }},
        {"level_labels",
         [&](const json &v) { c.level_labels = read<std::vector<std::vector<double>>>(v, "level_labels"); }},
        {"noise",
         [&](const json &v) {
             check(v.is_array(), "field 'noise' must be an array");
             c.noise_fields.clear();
             for (const auto &e : v) {
                 c.noise_fields.push_back(parse_field(e, "noise"));
             }
         }},
        {"noise_models",
         [&](const json &v) {
             check(v.is_array(), "field 'noise_models' must be an array");
             c.noise_models.clear();
             for (const auto &e : v) {
                 c.noise_models.push_back(parse_noise_model(e));
             }
         }},
        {"signal", [&](const json &v) { c.signal_field = parse_field(v, "signal"); }},
        {"protocol",
         [&](const json &v) {
             try {
                 c.protocol = parse_protocol(read<std::string>(v, "protocol"));
             } catch (const ConfigError &) {
                 throw;
             } catch (const Error &e) {
                 throw ConfigError(e.what());
             }
         }},
        {"custom_state",
         [&](const json &v) {
             auto pairs = read<std::vector<std::vector<double>>>(v, "custom_state");
             c.custom_state.clear();
             for (const auto &p : pairs) {
                 check(p.size() == 2, "custom_state entries must be [re, im] pairs");
                 c.custom_state.push_back(p[0]);
                 c.custom_state.push_back(p[1]);
             }
         }},
        {"amplitude_swd", [&](const json &v) { c.amplitude_swd = read<double>(v, "amplitude_swd"); }},
        {"amplitude_separable", [&](const json &v) { c.amplitude_separable = read<double>(v, "amplitude_separable"); }},
        {"amplitude_ideal_separable",
         [&](const json &v) { c.amplitude_ideal_separable = read<double>(v, "amplitude_ideal_separable"); }},
        {"phi0", [&](const json &v) { c.phi0 = read<double>(v, "phi0"); }},
        {"shots", [&](const json &v) { c.shots = read<std::uint64_t>(v, "shots"); }},
        {"repeats", [&](const json &v) { c.repeats = read<std::size_t>(v, "repeats"); }},
        {"phase_stop", [&](const json &v) { c.phase_stop = read<double>(v, "phase_stop"); }},
        {"phase_points", [&](const json &v) { c.phase_points = read<std::size_t>(v, "phase_points"); }},
        {"window", [&](const json &v) { c.window = read<double>(v, "window"); }},
        {"signals", [&](const json &v) { c.signals = read<std::vector<double>>(v, "signals"); }},
        {"seed", [&](const json &v) { c.seed = read<std::uint64_t>(v, "seed"); }},
        {"output", [&](const json &v) { c.output = read<std::string>(v, "output"); }},
        {"histogram_bins", [&](const json &v) { c.histogram_bins = read<std::size_t>(v, "histogram_bins"); }},
        {"sweep_min", [&](const json &v) { c.sweep_min = read<std::size_t>(v, "sweep_min"); }},
        {"sweep_max", [&](const json &v) { c.sweep_max = read<std::size_t>(v, "sweep_max"); }},
        {"optimizer",
         [&](const json &v) {
             auto &o = c.optimizer;
             dispatch(v, "optimizer",
                      {{"restriction", [&](const json &x) { o.restriction = read<std::string>(x, "optimizer.restriction"); }},
                       {"restarts", [&](const json &x) { o.restarts = read<std::size_t>(x, "optimizer.restarts"); }},
                       {"max_evaluations",
                        [&](const json &x) { o.max_evaluations = read<std::size_t>(x, "optimizer.max_evaluations"); }},
                       {"box", [&](const json &x) { o.box = read<double>(x, "optimizer.box"); }},
                       {"epsilons",
                        [&](const json &x) { o.epsilons = read<std::vector<double>>(x, "optimizer.epsilons"); }}});
         }},
        {"tomography",
         [&](const json &v) {
             auto &t = c.tomography;
             dispatch(v, "tomography",
                      {{"state", [&](const json &x) { t.state = read<std::string>(x, "tomography.state"); }},
                       {"shots", [&](const json &x) { t.shots = read<std::uint64_t>(x, "tomography.shots"); }},
                       {"bootstrap", [&](const json &x) { t.bootstrap = read<std::size_t>(x, "tomography.bootstrap"); }},
                       {"p_pi", [&](const json &x) { t.p_pi = read<double>(x, "tomography.p_pi"); }},
                       {"p_addressed", [&](const json &x) {
                            t.p_addressed = read<std::vector<double>>(x, "tomography.p_addressed");
                        }}});
         }},
        {"calibration",
         [&](const json &v) {
             auto &k = c.calibration;
             dispatch(v, "calibration",
                      {{"rabi_khz", [&](const json &x) { k.rabi_khz = read<std::vector<double>>(x, "calibration.rabi_khz"); }},
                       {"detuning_khz",
                        [&](const json &x) { k.detuning_khz = read<double>(x, "calibration.detuning_khz"); }},
                       {"coupling", [&](const json &x) { k.coupling = read<double>(x, "calibration.coupling"); }},
                       {"g_factor", [&](const json &x) { k.g_factor = read<double>(x, "calibration.g_factor"); }},
                       {"reductions",
                        [&](const json &x) { k.reductions = read<std::vector<double>>(x, "calibration.reductions"); }},
                       {"echo_segments", [&](const json &x) {
                            k.echo_segments = read<std::size_t>(x, "calibration.echo_segments");
                        }}});
         }},
        {"scaling",
         [&](const json &v) {
             auto &s = c.scaling;
             dispatch(v, "scaling",
                      {{"shots", [&](const json &x) { s.shots = read<std::vector<std::uint64_t>>(x, "scaling.shots"); }},
                       {"repeats", [&](const json &x) { s.repeats = read<std::size_t>(x, "scaling.repeats"); }}});
         }},
    };
    dispatch(j, "config", h);
}

}  // namespace

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Swd:
            return "swd";
        case Protocol::SeparableTwoLevel:
            return "separable-two-level";
        case Protocol::SixLevelOptimized:
            return "six-level-optimized";
        case Protocol::CustomState:
            return "custom-state";
    }
    return "swd";
}

Protocol parse_protocol(const std::string &name) {
    for (Protocol p : {Protocol::Swd, Protocol::SeparableTwoLevel, Protocol::SixLevelOptimized, Protocol::CustomState}) {
        if (protocol_name(p) == name) {
            return p;
        }
    }
    throw ConfigError("unknown protocol '" + name + "'");
}

void ScenarioConfig::validate() const {
    check(kappa > 0.0, "kappa must be positive");
    check(time > 0.0, "time must be positive");
    check(spacing > 0.0, "spacing must be positive");
    check(sensors >= 1, "sensors must be >= 1");
    check(levels == "bold" || levels == "d52" || levels == "qubits" || levels == "explicit",
          "levels must be bold, d52, qubits or explicit");
    if (levels == "bold") {
        check(sensors == 3, "levels 'bold' needs exactly 3 sensors");
    }
    if (levels == "explicit") {
        check(level_labels.size() == sensors, "level_labels needs one label list per sensor");
    }
    check(!noise_fields.empty(), "noise needs at least one component");
    for (const auto &f : noise_fields) {
        check(f.kind() == FieldComponent::Kind::Polynomial || f.samples().size() == sensors,
              "tabulated noise components need one sample per sensor");
    }
    check(signal_field.kind() == FieldComponent::Kind::Polynomial || signal_field.samples().size() == sensors,
          "a tabulated signal needs one sample per sensor");
    check(noise_models.empty() || noise_models.size() == noise_fields.size(),
          "noise_models needs one entry per noise component");
    for (double a : {amplitude_swd, amplitude_separable, amplitude_ideal_separable}) {
        check(a > 0.0 && a <= 1.0, "amplitudes must lie in (0, 1]");
    }
    check(shots >= 1, "shots: N must be >= 1");
    check(repeats >= 1, "repeats: M must be >= 1");
    check(phase_points >= 2, "phase_points must be >= 2");
    check(window > 0.0 && window <= M_PI / 2, "window must lie in (0, pi/2]");
    check(!signals.empty(), "signals must not be empty");
    check(histogram_bins >= 1, "histogram_bins must be >= 1");
    check(sweep_min >= 2 && sweep_max >= sweep_min && sweep_max <= 10, "sweep range must satisfy 2 <= min <= max <= 10");
    check(optimizer.restriction == "full-six-level" || optimizer.restriction == "bold-two-level",
          "optimizer.restriction must be full-six-level or bold-two-level");
    check(optimizer.restarts >= 1, "optimizer.restarts must be >= 1");
    check(optimizer.max_evaluations >= 10, "optimizer.max_evaluations must be >= 10");
    check(optimizer.box > 0.0, "optimizer.box must be positive");
    for (double e : optimizer.epsilons) {
        check(e >= 0.0 && e <= 1.0, "optimizer.epsilons entries must lie in [0, 1]");
    }
    check(tomography.state == "ghz" || tomography.state == "separable" || tomography.state == "noisy-swd",
          "tomography.state must be ghz, separable or noisy-swd");
    check(tomography.shots >= 1, "tomography.shots must be >= 1");
    check(tomography.bootstrap >= 2, "tomography.bootstrap must be >= 2");
    check(tomography.p_pi >= 0.0 && tomography.p_pi <= 1.0, "tomography.p_pi must lie in [0, 1]");
    check(tomography.p_addressed.size() == 3, "tomography.p_addressed needs three entries");
    for (double p : tomography.p_addressed) {
        check(p >= 0.0 && p <= 1.0, "tomography.p_addressed entries must lie in [0, 1]");
    }
    check(calibration.detuning_khz != 0.0, "calibration.detuning_khz must be nonzero");
    check(calibration.echo_segments >= 1, "calibration.echo_segments must be >= 1");
    for (double f : calibration.reductions) {
        check(f > 0.0 && f <= 1.0, "calibration.reductions entries must lie in (0, 1]");
    }
    check(!scaling.shots.empty(), "scaling.shots must not be empty");
    for (auto n : scaling.shots) {
        check(n >= 1, "scaling.shots: N must be >= 1");
    }
    check(scaling.repeats >= 1, "scaling.repeats must be >= 1");
    if (protocol == Protocol::CustomState) {
        check(custom_state.size() == 2 * sensor_levels().dimension(),
              "custom_state needs one [re, im] pair per basis state");
    }
}

double ScenarioConfig::frequency() const {
    SensorLayout lay = layout();
    DiagonalGenerator g = build_signal_generator(lay, signal(), kappa, time, sensor_levels());
    DfsCensus census = enumerate_dfs(sensor_levels(), lay, noise());
    return spectral_range(best_dfs(census.subspaces, g), g).width;
}

SensorLevels ScenarioConfig::sensor_levels() const {
    if (levels == "bold") {
        return SensorLevels::bold();
    }
    if (levels == "d52") {
        return SensorLevels::d52(sensors);
    }
    if (levels == "qubits") {
        return SensorLevels::qubits(sensors);
    }
    return SensorLevels(level_labels);
}

SensorLayout ScenarioConfig::layout() const { return SensorLayout::equidistant(sensors, spacing); }

std::vector<FieldComponent> ScenarioConfig::noise() const { return noise_fields; }

FieldComponent ScenarioConfig::signal() const { return signal_field; }

CampaignConfig ScenarioConfig::campaign(std::size_t threads) const {
    CampaignConfig c;
    c.signals = signals;
    c.phase_grid = linear_grid(phase_stop, phase_points);
    c.shots = shots;
    c.repeats = repeats;
    c.window = window;
    c.seed = seed;
    c.threads = threads;
    c.histogram_bins = histogram_bins;
    return c;
}

ParityModel ScenarioConfig::model(double amplitude) const {
    ParityModel m;
    m.amplitude = amplitude;
    m.frequency = frequency();
    m.offset = phi0;
    return m;
}

std::vector<std::string> preset_names() { return {"paper-experiment", "full-manifold", "smoke"}; }

ScenarioConfig preset(const std::string &name) {
    ScenarioConfig c;
    c.name = name;
    if (name == "paper-experiment") {
        return c;
    }
    if (name == "full-manifold") {
        c.levels = "d52";
        return c;
    }
    if (name == "smoke") {
        c.repeats = 40;
        c.optimizer.restriction = "bold-two-level";
        c.optimizer.restarts = 2;
        c.optimizer.max_evaluations = 3000;
        c.tomography.bootstrap = 4;
        c.scaling.shots = {8, 72};
        c.scaling.repeats = 40;
        c.sweep_max = 4;
        return c;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

ScenarioConfig load_config_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    check(j.is_object(), "config must be a JSON object");
    ScenarioConfig c;
    if (j.contains("preset")) {
        c = preset(read<std::string>(j.at("preset"), "preset"));
    }
    apply_overrides(c, j);
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string &path) {
    std::ifstream in(path);
    check(static_cast<bool>(in), "cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_config_text(buffer.str());
}

std::string config_to_json(const ScenarioConfig &c) {
    json j;
    j["name"] = c.name;
    j["kappa"] = c.kappa;
    j["time"] = c.time;
    j["spacing"] = c.spacing;
    j["sensors"] = c.sensors;
    j["levels"] = c.levels;
    j["level_labels"] = c.level_labels;
    j["noise"] = json::array();
    for (const auto &f : c.noise_fields) {
        j["noise"].push_back(field_json(f));
    }
    j["noise_models"] = json::array();
    for (const auto &m : c.noise_models) {
        j["noise_models"].push_back(noise_model_json(m));
    }
    j["signal"] = field_json(c.signal_field);
    j["protocol"] = protocol_name(c.protocol);
    j["custom_state"] = json::array();
    for (std::size_t i = 0; i + 1 < c.custom_state.size(); i += 2) {
        j["custom_state"].push_back({c.custom_state[i], c.custom_state[i + 1]});
    }
    j["amplitude_swd"] = c.amplitude_swd;
    j["amplitude_separable"] = c.amplitude_separable;
    j["amplitude_ideal_separable"] = c.amplitude_ideal_separable;
    j["phi0"] = c.phi0;
    j["shots"] = c.shots;
    j["repeats"] = c.repeats;
    j["phase_stop"] = c.phase_stop;
    j["phase_points"] = c.phase_points;
    j["window"] = c.window;
    j["signals"] = c.signals;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["histogram_bins"] = c.histogram_bins;
    j["sweep_min"] = c.sweep_min;
    j["sweep_max"] = c.sweep_max;
    j["optimizer"] = {{"restriction", c.optimizer.restriction},
                      {"restarts", c.optimizer.restarts},
                      {"max_evaluations", c.optimizer.max_evaluations},
                      {"box", c.optimizer.box},
                      {"epsilons", c.optimizer.epsilons}};
    j["tomography"] = {{"state", c.tomography.state},
                       {"shots", c.tomography.shots},
                       {"bootstrap", c.tomography.bootstrap},
                       {"p_pi", c.tomography.p_pi},
                       {"p_addressed", c.tomography.p_addressed}};
    j["calibration"] = {{"rabi_khz", c.calibration.rabi_khz},
                        {"detuning_khz", c.calibration.detuning_khz},
                        {"coupling", c.calibration.coupling},
                        {"g_factor", c.calibration.g_factor},
                        {"reductions", c.calibration.reductions},
                        {"echo_segments", c.calibration.echo_segments}};
    j["scaling"] = {{"shots", c.scaling.shots}, {"repeats", c.scaling.repeats}};
    return j.dump(2);
}

std::string config_hash(const ScenarioConfig &config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dfsense
