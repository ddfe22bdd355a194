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

#include "dfsense/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dfsense {

FieldComponent FieldComponent::polynomial(int order, double strength) {
    require(order >= 0, "polynomial field order must be >= 0");
    FieldComponent c;
    c.kind_ = Kind::Polynomial;
    c.order_ = order;
    c.strength_ = strength;
    return c;
}

FieldComponent FieldComponent::tabulated(std::vector<double> samples, double strength) {
    require(!samples.empty(), "tabulated field needs at least one sample");
    FieldComponent c;
    c.kind_ = Kind::Tabulated;
    c.samples_ = std::move(samples);
    c.strength_ = strength;
    return c;
}

double FieldComponent::shape(double x) const {
    require(kind_ == Kind::Polynomial, "shape(x) is only defined for polynomial fields");
    double value = 1.0;
    for (int k = 1; k <= order_; ++k) {
        value *= x / k;
    }
    return value;
}

FieldComponent FieldComponent::with_strength(double strength) const {
    FieldComponent c = *this;
    c.strength_ = strength;
    return c;
}

SensorLayout::SensorLayout(std::vector<double> positions) : positions_(std::move(positions)) {
    require(!positions_.empty(), "sensor layout must contain at least one position");
    for (std::size_t i = 1; i < positions_.size(); ++i) {
        require(positions_[i] > positions_[i - 1], "sensor positions must be strictly increasing");
    }
}

SensorLayout SensorLayout::equidistant(std::size_t count, double spacing) {
    require(count >= 1, "layout needs at least one sensor");
    require(spacing > 0, "sensor spacing must be positive");
    std::vector<double> xs(count);
    double centre = 0.5 * static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        xs[i] = (static_cast<double>(i) - centre) * spacing;
    }
    return SensorLayout(std::move(xs));
}

std::optional<double> SensorLayout::spacing() const {
    if (positions_.size() < 2) {
        return std::nullopt;
    }
    double d = positions_[1] - positions_[0];
    for (std::size_t i = 2; i < positions_.size(); ++i) {
        if (std::abs((positions_[i] - positions_[i - 1]) - d) > 1e-9 * std::abs(d)) {
            return std::nullopt;
        }
    }
    return d;
}

SensorLayout SensorLayout::subset(std::span<const std::size_t> indices) const {
    std::vector<double> xs;
    xs.reserve(indices.size());
    for (std::size_t i : indices) {
        require(i < positions_.size(), "layout subset index out of range");
        xs.push_back(positions_[i]);
    }
    return SensorLayout(std::move(xs));
}

RVector field_vector(const FieldComponent &component, const SensorLayout &layout) {
    RVector v(static_cast<Eigen::Index>(layout.size()));
    if (component.kind() == FieldComponent::Kind::Tabulated) {
        require(component.samples().size() == layout.size(),
                "tabulated field has " + std::to_string(component.samples().size()) +
                    " samples but the layout has " + std::to_string(layout.size()) + " sensors");
        for (std::size_t i = 0; i < layout.size(); ++i) {
            v[static_cast<Eigen::Index>(i)] = component.strength() * component.samples()[i];
        }
        return v;
    }
    for (std::size_t i = 0; i < layout.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = component.strength() * component.shape(layout[i]);
    }
    return v;
}

NoiseMatrix noise_matrix(std::span<const FieldComponent> noise, const SensorLayout &layout) {
    require(!noise.empty(), "noise matrix needs at least one noise component");
    NoiseMatrix q;
    q.entries.resize(static_cast<Eigen::Index>(noise.size()), static_cast<Eigen::Index>(layout.size()));
    for (std::size_t j = 0; j < noise.size(); ++j) {
        q.entries.row(static_cast<Eigen::Index>(j)) = field_vector(noise[j].unit(), layout).transpose();
    }
    return q;
}

std::size_t numerical_rank(const RMatrix &m) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<RMatrix> svd(m);
    const RVector &sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) {
        return 0;
    }
    double cutoff = kRankTolerance * sv[0];
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) {
            ++rank;
        }
    }
    return rank;
}

bool dfs_exists(const NoiseMatrix &q) {
    return numerical_rank(q.entries) < q.sensor_count();
}

RVector kernel_direction(const NoiseMatrix &q) {
    const auto l = static_cast<Eigen::Index>(q.sensor_count());
    std::size_t rank = numerical_rank(q.entries);
    std::size_t kernel_dim = q.sensor_count() - rank;
    if (kernel_dim != 1) {
        throw Error("noise matrix kernel dimension is " + std::to_string(kernel_dim) + ", expected 1");
    }
    // Pad to a square matrix so the full V factor exposes the null space.
    RMatrix padded = RMatrix::Zero(std::max<Eigen::Index>(q.entries.rows(), l), l);
    padded.topRows(q.entries.rows()) = q.entries;
    Eigen::JacobiSVD<RMatrix> svd(padded, Eigen::ComputeFullV);
    RVector r = svd.matrixV().col(l - 1);

    Eigen::Index arg = 0;
    r.cwiseAbs().maxCoeff(&arg);
    r /= std::abs(r[arg]);
    for (Eigen::Index i = 0; i < l; ++i) {
        if (std::abs(r[i]) > kRankTolerance) {
            if (r[i] < 0) {
                r = -r;
            }
            break;
        }
    }
    // Flush round-off in structurally zero entries.
    for (Eigen::Index i = 0; i < l; ++i) {
        if (std::abs(r[i]) < 1e-13) {
            r[i] = 0.0;
        }
    }
    r[arg] = r[arg] > 0 ? 1.0 : -1.0;
    return r;
}

namespace {

bool next_combination(std::vector<std::size_t> &idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

std::size_t minimal_sensor_count(std::span<const FieldComponent> noise,
                                 std::span<const double> candidate_positions) {
    require(!noise.empty(), "minimal_sensor_count needs at least one noise component");
    std::vector<double> sorted(candidate_positions.begin(), candidate_positions.end());
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "candidate positions must be distinct");
    const std::size_t n = candidate_positions.size();

    // Build the full matrix over the candidates in the caller's order so
    // tabulated samples line up with their positions.
    RMatrix full(static_cast<Eigen::Index>(noise.size()), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < noise.size(); ++j) {
        const FieldComponent &c = noise[j];
        if (c.kind() == FieldComponent::Kind::Tabulated) {
            require(c.samples().size() == n, "tabulated noise field must have one sample per candidate position");
        }
        for (std::size_t i = 0; i < n; ++i) {
            full(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                c.kind() == FieldComponent::Kind::Tabulated ? c.samples()[i] : c.shape(candidate_positions[i]);
        }
    }

    for (std::size_t l = 1; l <= n; ++l) {
        std::vector<std::size_t> idx(l);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            RMatrix sub(full.rows(), static_cast<Eigen::Index>(l));
            for (std::size_t c = 0; c < l; ++c) {
                sub.col(static_cast<Eigen::Index>(c)) = full.col(static_cast<Eigen::Index>(idx[c]));
            }
            if (numerical_rank(sub) < l) {
                return l;
            }
        } while (next_combination(idx, n));
    }
    throw Error("no DFS with these positions");
}

}  // namespace dfsense
