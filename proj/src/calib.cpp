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

#include "dfsense/calib.hpp"

#include <cmath>

#include "dfsense/types.hpp"

namespace dfsense {

double dressed_sensitivity(double detuning, double rabi) {
    require(detuning != 0.0 || rabi != 0.0, "dressed_sensitivity: detuning and Rabi frequency are both zero");
    return detuning / (2.0 * std::hypot(detuning, rabi));
}

double dressed_validity_parameter(double detuning, double rabi, double fluctuation) {
    require(detuning != 0.0 || rabi != 0.0, "dressed_validity_parameter: detuning and Rabi frequency are both zero");
    double x = fluctuation * detuning / (rabi * rabi + detuning * detuning);
    return x * x;
}

bool dressed_valid(double detuning, double rabi, double fluctuation, double threshold) {
    return dressed_validity_parameter(detuning, rabi, fluctuation) < threshold;
}

double EchoSchedule::effective_ratio() const {
    require(sensing_time > 0.0, "echo schedule has no sensing time");
    double acc = 0.0, last = 0.0, sign = 1.0;
    for (double t : times) {
        acc += sign * (t - last);
        last = t;
        sign = -sign;
    }
    acc += sign * (sensing_time - last);
    return std::abs(acc) / sensing_time;
}

EchoSchedule echo_schedule(double reduction, double sensing_time, std::size_t segments) {
    require(reduction > 0.0 && reduction <= 1.0, "reduction factor must lie in (0, 1]");
    require(sensing_time > 0.0, "sensing time must be positive");
    require(segments >= 1, "at least one echo segment is required");
    EchoSchedule s{reduction, sensing_time, segments, {}};
    if (reduction == 1.0) {
        return s;
    }
    const double te = sensing_time / static_cast<double>(segments);
    for (std::size_t j = 0; j < segments; ++j) {
        double start = te * static_cast<double>(j);
        s.times.push_back(start + (1.0 - reduction) * te / 2.0);
        s.times.push_back(j + 1 == segments ? sensing_time : start + te);
    }
    return s;
}

StarkCalibration ac_stark_quadratic(double rabi, double detuning, double coupling, double spacing, double g_factor) {
    require(detuning != 0.0, "ac_stark_quadratic: detuning must be nonzero");
    require(spacing > 0.0 && g_factor != 0.0, "ac_stark_quadratic: spacing and g-factor must be nonzero");
    StarkCalibration c;
    c.stark_shift = rabi * rabi / (4.0 * detuning);
    // mu_B in rad/s per pT.
    const double mu_b = 2.0 * M_PI * kBohrMagnetonHzPerTesla * 1e-12;
    c.quadratic_field = coupling * rabi * rabi / (8.0 * detuning * mu_b * g_factor * spacing * spacing);
    c.edge_field_half = c.quadratic_field * spacing * spacing / 2.0;
    c.edge_field_full = c.quadratic_field * spacing * spacing;
    return c;
}

}  // namespace dfsense
