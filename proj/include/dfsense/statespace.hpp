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
#include <string>
#include <vector>

#include "dfsense/fields.hpp"
#include "dfsense/types.hpp"

namespace dfsense {

/// Per-sensor sensitivity labels s of a product of multi-level sensors.
///
/// Product basis states are ordered lexicographically over the per-sensor
/// level lists with sensor 0 most significant, so index 0 is
/// (levels[0][0], levels[1][0], ...).
class SensorLevels {
   public:
    explicit SensorLevels(std::vector<std::vector<double>> labels);

    /// l two-level sensors with labels {-s, +s}.
    static SensorLevels qubits(std::size_t count, double s = 0.5);
    /// Three sensors restricted to {+-1} x {+-2} x {+-1}.
    static SensorLevels bold();
    /// Full six-level manifold {-2, ..., 3} on each sensor.
    static SensorLevels d52(std::size_t count = 3);

    std::size_t sensor_count() const { return labels_.size(); }
    std::size_t levels(std::size_t sensor) const { return labels_[sensor].size(); }
    const std::vector<double> &labels(std::size_t sensor) const { return labels_[sensor]; }
    std::size_t dimension() const { return dimension_; }

    /// Label tuple of basis state `index`.
    std::vector<double> basis(std::size_t index) const;
    /// Per-sensor level indices of basis state `index`.
    std::vector<std::size_t> digits(std::size_t index) const;
    /// Index of the basis state with the given label tuple. Throws if a
    /// label is not available on its sensor.
    std::size_t index_of(std::span<const double> labels) const;

    std::string format(std::size_t index) const;

    bool operator==(const SensorLevels &) const = default;

   private:
    std::vector<std::vector<double>> labels_;
    std::size_t dimension_ = 1;
};

class PureState {
   public:
    PureState() = default;
    explicit PureState(CVector amplitudes);

    static PureState basis(std::size_t dimension, std::size_t index);

    const CVector &amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    CMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

   private:
    CVector amplitudes_;
};

/// Kronecker product of single-sensor states; sensor 0 is most significant.
PureState product_state(std::span<const CVector> factors);

class DensityMatrix {
   public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix m);

    static DensityMatrix from_pure(const PureState &psi) { return DensityMatrix(psi.projector()); }
    static DensityMatrix maximally_mixed(std::size_t dimension);

    const CMatrix &matrix() const { return m_; }
    std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
    Complex operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    double trace() const { return m_.trace().real(); }
    double hermiticity_error() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;

   private:
    CMatrix m_;
};

double fidelity(const DensityMatrix &rho, const PureState &psi);
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

/// Signal generator, diagonal in the sensor basis: G[s] = kappa t sum_i f(x_i) s_i.
struct DiagonalGenerator {
    RVector eigenvalues;

    std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
    double operator[](std::size_t i) const { return eigenvalues[static_cast<Eigen::Index>(i)]; }
};

DiagonalGenerator build_signal_generator(const SensorLayout &layout, const FieldComponent &signal, double kappa,
                                         double time, const SensorLevels &levels);

/// Multiplies amplitude s by exp(-i B G[s]).
PureState evolve_signal(const PureState &psi, const DiagonalGenerator &g, double strength);
/// Multiplies element (s, s') by exp(-i B (G[s] - G[s'])).
DensityMatrix evolve_signal(const DensityMatrix &rho, const DiagonalGenerator &g, double strength);

double variance(const DiagonalGenerator &g, const PureState &psi);

}  // namespace dfsense
