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
#include <vector>

#include "dfsense/fields.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// One decoherence-free subspace: the basis states sharing the noise
/// energies eta_j = f_j . s for every noise row j.
struct DfsRecord {
    RVector energy;
    /// Member basis indices in ascending (lexicographic) order; at least two.
    std::vector<std::size_t> members;

    std::size_t size() const { return members.size(); }
    bool contains(std::size_t index) const;
    /// Diagonal projector onto the subspace in a space of the given dimension.
    CMatrix projector(std::size_t dimension) const;
};

struct DfsCensus {
    std::size_t dimension = 0;
    std::vector<DfsRecord> subspaces;
    /// Basis states whose energy vector is unique (the complement of every DFS).
    std::vector<std::size_t> remainder;

    /// For every basis index, the position of its DFS in `subspaces`, or -1.
    std::vector<int> labels() const;
    CMatrix remainder_projector() const;
};

/// Groups every basis state by its rounded noise-energy vector. Groups with
/// two or more members become subspaces, ordered by energy.
DfsCensus enumerate_dfs(const SensorLevels &levels, const SensorLayout &layout,
                        std::span<const FieldComponent> noise);

struct SpectralRange {
    double width = 0.0;
    std::size_t argmax = 0;
    std::size_t argmin = 0;
};

/// Extreme generator eigenvalues over the members; ties go to the
/// lexicographically first member.
SpectralRange spectral_range(const DfsRecord &dfs, const DiagonalGenerator &g);

/// (|s_max> + |s_min>)/sqrt(2) inside the subspace. Throws for zero width.
PureState optimal_state(const DfsRecord &dfs, const DiagonalGenerator &g);

/// The subspace with the largest spectral range; ties prefer the smallest
/// |eta| and then the lexicographically smaller member list.
const DfsRecord &best_dfs(std::span<const DfsRecord> subspaces, const DiagonalGenerator &g);

}  // namespace dfsense
