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
#include <span>

#include "dfsense/dfs.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// Binary parity fringe P(B) = A cos(omega B + 3 phi_r + phi_0).
struct ParityModel {
    double amplitude = 1.0;
    /// rad per (pT/um^2).
    double frequency = 1.0;
    double analysis_phase = 0.0;
    double offset = 0.0;

    /// Validates A in [0, 1] and a positive, finite frequency.
    void validate() const;
    ParityModel with_phase(double phi_r) const;
    ParityModel with_amplitude(double a) const;

    /// Total fringe phase omega B + 3 phi_r + phi_0.
    double phase(double signal) const;
    double parity(double signal) const;
    double p_plus(double signal) const;
    double p_minus(double signal) const { return 1.0 - p_plus(signal); }
    /// dP/dB.
    double parity_slope(double signal) const;
    /// Closed-form binary-outcome CFI at the given signal.
    double cfi(double signal) const;
};

/// A^2 w^2 sin^2(phi) / (1 - A^2 cos^2(phi)).
double parity_cfi(double amplitude, double frequency, double phase);

/// 4 Var(G).
double qfi_pure(const PureState &psi, const DiagonalGenerator &g);

struct SldResult {
    CMatrix sld;
    double qfi = 0.0;
};

/// Symmetric logarithmic derivative and QFI for d(rho) = drho.
SldResult sld_and_qfi(const DensityMatrix &rho, const CMatrix &drho);

/// d(rho)/dB = -i [G, rho] for rho(B) = exp(-iBG) rho exp(iBG).
CMatrix signal_derivative(const DensityMatrix &rho, const DiagonalGenerator &g);

/// sum dp^2/p. Throws on p = 0 with dp != 0.
double cfi(std::span<const double> p, std::span<const double> dp);

/// 1/sqrt(F): the shot-normalized Cramer-Rao limit.
double rmse_bound(double fisher);

/// 10 log10(rmse_ref / rmse_new).
double improvement_db(double rmse_ref, double rmse_new);

/// QFI of a pure state after overwhelming dephasing, from the block form
/// sum_eta p_eta 4 Var_eta(G).
double qfi_dephased_pure(const PureState &psi, const DfsCensus &census, const DiagonalGenerator &g);

/// sigma_phi^{(x)n} with sigma_phi = cos(phi) Y - sin(phi) X.
CMatrix parity_observable(std::size_t qubits, double phi_r);

/// Maps qubit sensors onto the readout register: label -s -> |0>, +s -> |1>,
/// plus a phase i on the |0> level of sensor 0. With this map the state
/// (|s> + |-s>)/sqrt(2) yields P = cos(omega B + n phi_r).
DensityMatrix readout_frame(const DensityMatrix &rho);

/// Relabels a register of two-level sensors so that level `upper[i]` of
/// sensor i becomes |1> (an X on every sensor whose upper level is index 0).
/// Mapping a DFS pair this way turns (|s_max> + |s_min>)/sqrt(2) into a GHZ state.
DensityMatrix align_register(const DensityMatrix &rho, std::span<const std::size_t> upper);

/// <M> for the projective parity readout after readout_frame.
double parity_expectation(const DensityMatrix &rho, double phi_r);

}  // namespace dfsense
