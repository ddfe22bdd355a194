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
#include <optional>
#include <span>
#include <vector>

#include "dfsense/types.hpp"

namespace dfsense {

/// A scalar field profile over sensor positions.
///
/// Polynomial components follow the Taylor convention: the unit-strength
/// shape of order k is x^k / k!, so a quadratic component of strength B
/// contributes B x^2 / 2. Tabulated components carry one sample per sensor.
class FieldComponent {
   public:
    enum class Kind { Polynomial, Tabulated };

    static FieldComponent polynomial(int order, double strength = 1.0);
    static FieldComponent tabulated(std::vector<double> samples, double strength = 1.0);

    Kind kind() const { return kind_; }
    int order() const { return order_; }
    double strength() const { return strength_; }
    const std::vector<double> &samples() const { return samples_; }

    /// Unit-strength shape at position x (polynomial kind only).
    double shape(double x) const;

    FieldComponent with_strength(double strength) const;
    FieldComponent unit() const { return with_strength(1.0); }

    bool operator==(const FieldComponent &) const = default;

   private:
    Kind kind_ = Kind::Polynomial;
    int order_ = 0;
    double strength_ = 1.0;
    std::vector<double> samples_;
};

/// Sensor positions in micrometres, strictly increasing.
class SensorLayout {
   public:
    explicit SensorLayout(std::vector<double> positions);

    /// l sensors spaced by d, centred on the origin.
    static SensorLayout equidistant(std::size_t count, double spacing);

    std::size_t size() const { return positions_.size(); }
    const std::vector<double> &positions() const { return positions_; }
    double operator[](std::size_t i) const { return positions_[i]; }

    /// Neighbour spacing when the layout is equidistant.
    std::optional<double> spacing() const;

    SensorLayout subset(std::span<const std::size_t> indices) const;

   private:
    std::vector<double> positions_;
};

/// Rows are unit-strength noise field vectors over a layout: Q_ji = f_j(x_i).
struct NoiseMatrix {
    RMatrix entries;

    std::size_t noise_count() const { return static_cast<std::size_t>(entries.rows()); }
    std::size_t sensor_count() const { return static_cast<std::size_t>(entries.cols()); }
};

/// Relative singular-value cutoff used for every rank and kernel decision.
inline constexpr double kRankTolerance = 1e-10;

RVector field_vector(const FieldComponent &component, const SensorLayout &layout);

NoiseMatrix noise_matrix(std::span<const FieldComponent> noise, const SensorLayout &layout);

std::size_t numerical_rank(const RMatrix &m);

/// True iff rank(Q) < number of sensors.
bool dfs_exists(const NoiseMatrix &q);

/// The one-dimensional kernel of Q, scaled to max |r_i| = 1 with the first
/// nonzero entry positive. Throws if the kernel is not one-dimensional.
RVector kernel_direction(const NoiseMatrix &q);

/// Smallest number of sensors, drawn from the candidate positions, that
/// admits a decoherence-free subspace. Tabulated components must carry one
/// sample per candidate position. Throws if no subset works.
std::size_t minimal_sensor_count(std::span<const FieldComponent> noise,
                                 std::span<const double> candidate_positions);

}  // namespace dfsense
