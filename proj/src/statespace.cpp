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

#include "dfsense/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace dfsense {

SensorLevels::SensorLevels(std::vector<std::vector<double>> labels) : labels_(std::move(labels)) {
    require(!labels_.empty(), "sensor levels need at least one sensor");
    for (const auto &sensor : labels_) {
        require(!sensor.empty(), "every sensor needs at least one level");
        std::set<double> distinct(sensor.begin(), sensor.end());
        require(distinct.size() == sensor.size(), "sensitivity labels must be distinct per sensor");
        dimension_ *= sensor.size();
    }
}

SensorLevels SensorLevels::qubits(std::size_t count, double s) {
    require(s > 0, "qubit sensitivity must be positive");
    return SensorLevels(std::vector<std::vector<double>>(count, {-s, s}));
}

SensorLevels SensorLevels::bold() {
    return SensorLevels({{-1.0, 1.0}, {-2.0, 2.0}, {-1.0, 1.0}});
}

SensorLevels SensorLevels::d52(std::size_t count) {
    return SensorLevels(std::vector<std::vector<double>>(count, {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0}));
}

std::vector<std::size_t> SensorLevels::digits(std::size_t index) const {
    require(index < dimension_, "basis index out of range");
    std::vector<std::size_t> d(labels_.size());
    for (std::size_t i = labels_.size(); i-- > 0;) {
        d[i] = index % labels_[i].size();
        index /= labels_[i].size();
    }
    return d;
}

std::vector<double> SensorLevels::basis(std::size_t index) const {
    auto d = digits(index);
    std::vector<double> s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        s[i] = labels_[i][d[i]];
    }
    return s;
}

std::size_t SensorLevels::index_of(std::span<const double> labels) const {
    require(labels.size() == labels_.size(), "basis label tuple has the wrong number of sensors");
    std::size_t index = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        auto it = std::find_if(labels_[i].begin(), labels_[i].end(),
                               [&](double v) { return std::abs(v - labels[i]) < 1e-12; });
        require(it != labels_[i].end(), "label not available on sensor " + std::to_string(i));
        index = index * labels_[i].size() + static_cast<std::size_t>(it - labels_[i].begin());
    }
    return index;
}

std::string SensorLevels::format(std::size_t index) const {
    std::ostringstream out;
    out << '|';
    auto s = basis(index);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << s[i];
    }
    out << '>';
    return out.str();
}

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    require(amplitudes_.size() > 0, "state must have at least one amplitude");
    require(std::abs(amplitudes_.squaredNorm() - 1.0) <= 1e-12, "state is not normalized");
}

PureState PureState::basis(std::size_t dimension, std::size_t index) {
    require(index < dimension, "basis index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dimension));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(std::move(v));
}

PureState product_state(std::span<const CVector> factors) {
    require(!factors.empty(), "product state needs at least one factor");
    CVector v = factors[0].normalized();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        CVector f = factors[i].normalized();
        CVector next(v.size() * f.size());
        for (Eigen::Index a = 0; a < v.size(); ++a) {
            next.segment(a * f.size(), f.size()) = v[a] * f;
        }
        v = std::move(next);
    }
    return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols() && m_.rows() > 0, "density matrix must be square and nonempty");
    require(hermiticity_error() <= 1e-12, "density matrix is not Hermitian");
    require(std::abs(trace() - 1.0) <= 1e-10, "density matrix does not have unit trace");
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dimension) {
    return DensityMatrix(CMatrix::Identity(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension)) /
                         static_cast<double>(dimension));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double fidelity(const DensityMatrix &rho, const PureState &psi) {
    require(rho.dimension() == psi.dimension(), "fidelity: dimension mismatch");
    return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    require(a.dimension() == b.dimension(), "trace distance: dimension mismatch");
    CMatrix diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DiagonalGenerator build_signal_generator(const SensorLayout &layout, const FieldComponent &signal, double kappa,
                                         double time, const SensorLevels &levels) {
    require(layout.size() == levels.sensor_count(), "layout length does not match the number of sensors");
    RVector f = field_vector(signal.unit(), layout);
    DiagonalGenerator g;
    g.eigenvalues.resize(static_cast<Eigen::Index>(levels.dimension()));
    for (std::size_t k = 0; k < levels.dimension(); ++k) {
        auto s = levels.basis(k);
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            acc += f[static_cast<Eigen::Index>(i)] * s[i];
        }
        g.eigenvalues[static_cast<Eigen::Index>(k)] = kappa * time * acc;
    }
    return g;
}

PureState evolve_signal(const PureState &psi, const DiagonalGenerator &g, double strength) {
    require(psi.dimension() == g.dimension(), "evolve_signal: dimension mismatch");
    CVector out = psi.amplitudes();
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out[k] *= std::polar(1.0, -strength * g.eigenvalues[k]);
    }
    return PureState(std::move(out));
}

DensityMatrix evolve_signal(const DensityMatrix &rho, const DiagonalGenerator &g, double strength) {
    require(rho.dimension() == g.dimension(), "evolve_signal: dimension mismatch");
    const Eigen::Index n = static_cast<Eigen::Index>(rho.dimension());
    CVector phase(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        phase[k] = std::polar(1.0, -strength * g.eigenvalues[k]);
    }
    CMatrix out = phase.asDiagonal() * rho.matrix() * phase.conjugate().asDiagonal();
    return DensityMatrix(std::move(out));
}

double variance(const DiagonalGenerator &g, const PureState &psi) {
    require(psi.dimension() == g.dimension(), "variance: dimension mismatch");
    RVector p = psi.amplitudes().cwiseAbs2();
    double mean = p.dot(g.eigenvalues);
    double second = p.dot(g.eigenvalues.cwiseAbs2());
    return std::max(0.0, second - mean * mean);
}

}  // namespace dfsense
