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

#include "dfsense/dfs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

namespace dfsense {

bool DfsRecord::contains(std::size_t index) const {
    return std::binary_search(members.begin(), members.end(), index);
}

CMatrix DfsRecord::projector(std::size_t dimension) const {
    CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
    for (std::size_t k : members) {
        p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    }
    return p;
}

std::vector<int> DfsCensus::labels() const {
    std::vector<int> out(dimension, -1);
    for (std::size_t d = 0; d < subspaces.size(); ++d) {
        for (std::size_t k : subspaces[d].members) {
            out[k] = static_cast<int>(d);
        }
    }
    return out;
}

CMatrix DfsCensus::remainder_projector() const {
    CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
    for (std::size_t k : remainder) {
        p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    }
    return p;
}

DfsCensus enumerate_dfs(const SensorLevels &levels, const SensorLayout &layout,
                        std::span<const FieldComponent> noise) {
    require(layout.size() == levels.sensor_count(), "layout length does not match the number of sensors");
    std::vector<RVector> rows;
    rows.reserve(noise.size());
    for (const auto &c : noise) {
        rows.push_back(field_vector(c.unit(), layout));
    }

    // Energies are rounded to 1e-9 before grouping.
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> groups;
    std::map<std::vector<std::int64_t>, RVector> energies;
    for (std::size_t k = 0; k < levels.dimension(); ++k) {
        auto s = levels.basis(k);
        RVector eta(static_cast<Eigen::Index>(rows.size()));
        std::vector<std::int64_t> key(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            double e = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                e += rows[j][static_cast<Eigen::Index>(i)] * s[i];
            }
            eta[static_cast<Eigen::Index>(j)] = e;
            key[j] = std::llround(e * 1e9);
        }
        groups[key].push_back(k);
        energies.emplace(key, eta);
    }

    DfsCensus census;
    census.dimension = levels.dimension();
    for (auto &[key, members] : groups) {
        if (members.size() >= 2) {
            census.subspaces.push_back(DfsRecord{energies.at(key), std::move(members)});
        } else {
            census.remainder.push_back(members.front());
        }
    }
    std::sort(census.remainder.begin(), census.remainder.end());
    return census;
}

SpectralRange spectral_range(const DfsRecord &dfs, const DiagonalGenerator &g) {
    require(!dfs.members.empty(), "spectral range of an empty subspace");
    SpectralRange r;
    r.argmax = r.argmin = dfs.members.front();
    for (std::size_t k : dfs.members) {
        require(k < g.dimension(), "DFS member outside the generator's space");
        if (g[k] > g[r.argmax]) {
            r.argmax = k;
        }
        if (g[k] < g[r.argmin]) {
            r.argmin = k;
        }
    }
    r.width = g[r.argmax] - g[r.argmin];
    return r;
}

PureState optimal_state(const DfsRecord &dfs, const DiagonalGenerator &g) {
    SpectralRange r = spectral_range(dfs, g);
    if (!(r.width > 0.0)) {
        throw Error("DFS has zero spectral range: no sensitivity to the signal inside it");
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(g.dimension()));
    v[static_cast<Eigen::Index>(r.argmax)] = M_SQRT1_2;
    v[static_cast<Eigen::Index>(r.argmin)] = M_SQRT1_2;
    return PureState(std::move(v));
}

const DfsRecord &best_dfs(std::span<const DfsRecord> subspaces, const DiagonalGenerator &g) {
    require(!subspaces.empty(), "best_dfs needs at least one subspace");
    const DfsRecord *best = &subspaces.front();
    double best_width = spectral_range(*best, g).width;
    constexpr double tie = 1e-12;
    for (const auto &d : subspaces.subspan(1)) {
        double w = spectral_range(d, g).width;
        double scale = std::max(1.0, std::abs(best_width));
        if (w > best_width + tie * scale) {
            best = &d;
            best_width = w;
        } else if (std::abs(w - best_width) <= tie * scale) {
            double na = d.energy.norm();
            double nb = best->energy.norm();
            if (na < nb - 1e-12 || (std::abs(na - nb) <= 1e-12 && d.members < best->members)) {
                best = &d;
                best_width = std::max(w, best_width);
            }
        }
    }
    if (!(best_width > 0.0)) {
        throw Error("every DFS has zero spectral range: the signal is not detectable under this noise");
    }
    return *best;
}

}  // namespace dfsense
