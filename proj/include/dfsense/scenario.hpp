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
#include <cstdint>
#include <string>
#include <vector>

#include "dfsense/channels.hpp"
#include "dfsense/estimation.hpp"
#include "dfsense/fields.hpp"
#include "dfsense/optimize.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// Raised for unreadable, malformed or invalid configuration.
class ConfigError : public Error {
   public:
    using Error::Error;
};

enum class Protocol { Swd, SeparableTwoLevel, SixLevelOptimized, CustomState };

struct OptimizerSection {
    std::string restriction = "full-six-level";
    std::size_t restarts = 10;
    std::size_t max_evaluations = 100000;
    double box = 1.0;
    std::vector<double> epsilons{0.01, 0.05, 0.1};
};

struct TomographySection {
    /// ghz | separable | noisy-swd
    std::string state = "ghz";
    std::uint64_t shots = 480;
    std::size_t bootstrap = 300;
    double p_pi = 0.011;
    std::vector<double> p_addressed{0.040, 0.02, 0.040};
};

struct CalibrationSection {
    /// Rabi frequencies in kHz (the 2 pi factor is applied internally).
    std::vector<double> rabi_khz{2.21, 3.39, 4.20, 4.67, 5.24, 5.92};
    double detuning_khz = -700.0;
    double coupling = 0.979;
    double g_factor = 1.2;
    std::vector<double> reductions{0.25, 0.5, 0.75, 1.0};
    std::size_t echo_segments = 4;
};

struct ScalingSection {
    std::vector<std::uint64_t> shots{2, 4, 8, 12, 16, 20, 24, 32, 40, 50, 60, 72, 100, 150, 200};
    std::size_t repeats = 2000;
};

struct ScenarioConfig {
    std::string name = "custom";
    /// kappa in rad s^-1 pT^-1.
    double kappa = 2.0 * M_PI * 0.0168;
    double time = 0.08;
    double spacing = 4.9;
    std::size_t sensors = 3;
    /// bold | d52 | qubits | explicit via level_labels
    std::string levels = "bold";
    std::vector<std::vector<double>> level_labels;
    std::vector<FieldComponent> noise_fields{FieldComponent::polynomial(0), FieldComponent::polynomial(1)};
    std::vector<IntegratedNoise> noise_models;
    FieldComponent signal_field = FieldComponent::polynomial(2);
    Protocol protocol = Protocol::Swd;
    std::vector<double> custom_state;
    double amplitude_swd = 0.45;
    double amplitude_separable = 0.146;
    double amplitude_ideal_separable = 0.25;
    double phi0 = 0.0;
    std::uint64_t shots = 72;
    std::size_t repeats = 500;
    double phase_stop = 1.6 * M_PI;
    std::size_t phase_points = 60;
    double window = 0.73;
    std::vector<double> signals{0.0, 2.1, 4.7, 7.6, 9.5, 11.9, 15.2};
    std::uint64_t seed = 20260101;
    std::string output = "out";
    std::size_t histogram_bins = 24;
    std::size_t sweep_min = 2;
    std::size_t sweep_max = 7;
    OptimizerSection optimizer;
    TomographySection tomography;
    CalibrationSection calibration;
    ScalingSection scaling;

    void validate() const;

    double frequency() const;
    SensorLevels sensor_levels() const;
    SensorLayout layout() const;
    std::vector<FieldComponent> noise() const;
    FieldComponent signal() const;
    CampaignConfig campaign(std::size_t threads) const;
    ParityModel model(double amplitude) const;
};

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string &name);

/// Parses and validates a JSON config. An optional "preset" key selects the
/// base values; every other key overrides them. Unknown keys are rejected.
ScenarioConfig load_config_text(const std::string &text);
ScenarioConfig load_config(const std::string &path);

/// Canonical JSON of a resolved config (reloads to the same values).
std::string config_to_json(const ScenarioConfig &config);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ScenarioConfig &config);

std::string protocol_name(Protocol p);
Protocol parse_protocol(const std::string &name);

}  // namespace dfsense
