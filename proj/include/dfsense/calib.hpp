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
#include <vector>

namespace dfsense {

/// Bohr magneton over Planck's constant, Hz per tesla (CODATA 2018).
inline constexpr double kBohrMagnetonHzPerTesla = 13.996244936e9;

/// Dressed-state sensitivity Delta / (2 sqrt(Delta^2 + Omega^2)); the two
/// dressed states carry -s and +s. Angular frequencies in rad/s.
double dressed_sensitivity(double detuning, double rabi);

/// (delta Delta / (Omega^2 + Delta^2))^2 for a detuning fluctuation delta.
double dressed_validity_parameter(double detuning, double rabi, double fluctuation);

/// True when the validity parameter is below `threshold`.
bool dressed_valid(double detuning, double rabi, double fluctuation, double threshold = 1e-2);

struct EchoSchedule {
    double reduction = 1.0;
    double sensing_time = 0.0;
    std::size_t segments = 1;
    /// Sign flips, strictly increasing in (0, sensing_time].
    std::vector<double> times;

    /// |integral of the sign over [0, t_s]| / t_s.
    double effective_ratio() const;
};

/// Per segment of length t_e = t_s / k: a flip at (1 - F) t_e / 2 and one at
/// t_e. F = 1 emits no echoes.
EchoSchedule echo_schedule(double reduction, double sensing_time, std::size_t segments);

struct StarkCalibration {
    /// Omega^2 / (4 Delta_q), rad/s.
    double stark_shift = 0.0;
    /// Effective quadratic field, pT/um^2.
    double quadratic_field = 0.0;
    /// B^q d^2 / 2 and B^q d^2, pT: the two field-offset conventions at the outer sensors.
    double edge_field_half = 0.0;
    double edge_field_full = 0.0;
};

/// B^q = C Omega^2 / (8 Delta_q mu_B g_D d^2). Omega and Delta_q in rad/s, d in um.
StarkCalibration ac_stark_quadratic(double rabi, double detuning, double coupling, double spacing, double g_factor);

}  // namespace dfsense
