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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dfsense/statespace.hpp"

namespace dfsense {

/// Outcome counts in one Pauli product basis such as "XYZ". Outcome bits
/// follow the qubit order (qubit 0 most significant); bit 0 is the +1
/// eigenstate of that qubit's Pauli operator.
struct BasisCounts {
    std::string basis;
    std::vector<std::uint64_t> counts;

    std::uint64_t shots() const;
};

/// All 3^n Pauli product labels in lexicographic X < Y < Z order.
std::vector<std::string> pauli_bases(std::size_t qubits);

/// Unitary taking the basis eigenvectors to the computational basis.
CMatrix basis_rotation(const std::string &basis);

std::vector<double> basis_probabilities(const DensityMatrix &rho, const std::string &basis);

/// Multinomial draw of `shots` outcomes from the Born probabilities.
BasisCounts simulate_basis_counts(const DensityMatrix &rho, const std::string &basis, std::uint64_t shots,
                                  std::uint64_t seed);

/// Counts in every Pauli basis; basis k uses stream (seed, k).
std::vector<BasisCounts> simulate_tomography(const DensityMatrix &rho, std::uint64_t shots, std::uint64_t seed);

/// Counts = round(shots * p) in every basis (the noiseless limit).
std::vector<BasisCounts> expected_tomography(const DensityMatrix &rho, std::uint64_t shots);

struct MleOptions {
    std::size_t max_iterations = 10000;
    /// Stop when |Delta logL| <= tolerance * |logL|.
    double tolerance = 1e-10;
};

struct Reconstruction {
    DensityMatrix rho;
    double log_likelihood = 0.0;
    std::size_t iterations = 0;
    /// The iteration cap was reached before the stopping rule.
    bool capped = false;
};

/// Maximum-likelihood state from the counts of all 3^n bases, by the
/// R rho R fixed-point iteration. A step that would lower the likelihood is
/// replaced by a diluted step (I + e R) rho (I + e R) with halving e, so the
/// likelihood never decreases.
Reconstruction reconstruct_mle(std::span<const BasisCounts> counts, const MleOptions &options = {});

double log_likelihood(const DensityMatrix &rho, std::span<const BasisCounts> counts);

/// max_phi <GHZ_phi|rho|GHZ_phi> for GHZ_phi = (|a> + e^{i phi}|b>)/sqrt(2).
double ghz_fidelity(const DensityMatrix &rho, std::size_t a, std::size_t b);

/// 2 |rho_ab|.
double coherence_amplitude(const DensityMatrix &rho, std::size_t a, std::size_t b);

struct BootstrapResult {
    double value = 0.0;
    double std = 0.0;
    std::vector<double> samples;
};

/// Resamples each basis' counts multinomially from its observed frequencies,
/// reconstructs and extracts; value comes from the raw counts.
BootstrapResult bootstrap_errorbars(std::span<const BasisCounts> counts,
                                    const std::function<double(const DensityMatrix &)> &extractor,
                                    std::size_t repeats, std::uint64_t seed, std::size_t threads = 1,
                                    const MleOptions &options = {});

}  // namespace dfsense
