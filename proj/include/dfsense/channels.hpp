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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dfsense/dfs.hpp"
#include "dfsense/fields.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// Distribution of the time-integrated strength of one noise component.
struct IntegratedNoise {
    enum class Kind { Gaussian, Uniform, Overwhelming };

    Kind kind = Kind::Overwhelming;
    /// Standard deviation (Gaussian) or half-width (Uniform), in pT s.
    double width = 0.0;

    static IntegratedNoise gaussian(double sigma);
    static IntegratedNoise uniform(double half_width);
    static IntegratedNoise overwhelming() { return {}; }

    /// Characteristic function E[exp(-i u B)] of the distribution.
    double characteristic(double u) const;
};

/// Keeps diagonal elements and coherences inside any DFS, zeroes the rest.
DensityMatrix overwhelming_dephasing(const DensityMatrix &rho, const DfsCensus &census);

/// Finite-strength correlated dephasing. Element (s, s') is multiplied by
/// prod_j chi_j(kappa (s - s') . f_j) where chi_j is the characteristic
/// function of component j's integrated strength.
DensityMatrix finite_dephasing(const DensityMatrix &rho, const SensorLevels &levels, const SensorLayout &layout,
                               std::span<const FieldComponent> noise, std::span<const IntegratedNoise> models,
                               double kappa);

/// Single-qutrit Kraus operators of the cascaded decay in level order
/// (e1, e2, g): e2 -> e1 and e1 -> g, each with probability p.
std::array<CMatrix, 3> qutrit_decay_kraus(double p);

/// p(t) = 1 - exp(-t / tau).
double decay_probability(double time, double lifetime);

/// Applies the qutrit decay map to each of three qutrits (27-dim state).
DensityMatrix amplitude_damping_qutrit(const DensityMatrix &rho, double time, double lifetime);

/// Ideal pi pulse exp(-i pi/2 (|a><b| + |b><a|)) on every qutrit.
DensityMatrix qutrit_pi_pulse(const DensityMatrix &rho, std::size_t level_a, std::size_t level_b);

/// Per-qubit depolarization: with probability p_i qubit i is replaced by I/2.
DensityMatrix depolarize_independent(const DensityMatrix &rho, std::span<const double> probabilities);

/// Error probability combining pi-pulse and addressed-sequence errors:
/// p = 1 - (1 - p_pi)(1 - p_a).
double combined_error_probability(double p_pi, double p_addressed);

/// Applies a single-site operator to site `site` of a register of qudits of
/// dimension `local_dim` (site 0 most significant).
CMatrix embed_local(const CMatrix &op, std::size_t site, std::size_t sites, std::size_t local_dim);

}  // namespace dfsense
