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

#include "dfsense/metrology.hpp"

#include <cmath>

#include "dfsense/channels.hpp"

namespace dfsense {

void ParityModel::validate() const {
    require(amplitude >= 0.0 && amplitude <= 1.0, "parity amplitude must lie in [0, 1]");
    require(std::isfinite(frequency) && frequency > 0.0, "fringe frequency must be positive");
}

ParityModel ParityModel::with_phase(double phi_r) const {
    ParityModel m = *this;
    m.analysis_phase = phi_r;
    return m;
}

ParityModel ParityModel::with_amplitude(double a) const {
    ParityModel m = *this;
    m.amplitude = a;
    return m;
}

double ParityModel::phase(double signal) const { return frequency * signal + 3.0 * analysis_phase + offset; }

double ParityModel::parity(double signal) const { return amplitude * std::cos(phase(signal)); }

double ParityModel::p_plus(double signal) const { return 0.5 * (1.0 + parity(signal)); }

double ParityModel::parity_slope(double signal) const {
    return -amplitude * frequency * std::sin(phase(signal));
}

double ParityModel::cfi(double signal) const { return parity_cfi(amplitude, frequency, phase(signal)); }

double parity_cfi(double amplitude, double frequency, double phase) {
    double c = std::cos(phase);
    double s = std::sin(phase);
    double denom = 1.0 - amplitude * amplitude * c * c;
    if (denom <= 0.0) {
        // A = 1 at a fringe extremum: both p and dp vanish for one outcome.
        return 0.0;
    }
    return amplitude * amplitude * frequency * frequency * s * s / denom;
}

double qfi_pure(const PureState &psi, const DiagonalGenerator &g) { return 4.0 * variance(g, psi); }

SldResult sld_and_qfi(const DensityMatrix &rho, const CMatrix &drho) {
    require(drho.rows() == drho.cols() && static_cast<std::size_t>(drho.rows()) == rho.dimension(),
            "sld_and_qfi: derivative has the wrong shape");
    require((drho - drho.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "sld_and_qfi: derivative is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    const RVector &lambda = es.eigenvalues();
    const CMatrix &v = es.eigenvectors();
    CMatrix d = v.adjoint() * drho * v;
    const double cutoff = 1e-12 * std::max(1.0, std::abs(rho.trace()));
    const Eigen::Index n = d.rows();
    CMatrix l = CMatrix::Zero(n, n);
    double f = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            double sum = lambda[j] + lambda[k];
            if (sum > cutoff) {
                l(j, k) = 2.0 * d(j, k) / sum;
                f += 2.0 * std::norm(d(j, k)) / sum;
            }
        }
    }
    return {v * l * v.adjoint(), f};
}

CMatrix signal_derivative(const DensityMatrix &rho, const DiagonalGenerator &g) {
    require(rho.dimension() == g.dimension(), "signal_derivative: dimension mismatch");
    const CMatrix &m = rho.matrix();
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out(r, c) = Complex(0, -1) * (g.eigenvalues[r] - g.eigenvalues[c]) * m(r, c);
        }
    }
    return out;
}

double cfi(std::span<const double> p, std::span<const double> dp) {
    require(p.size() == dp.size() && !p.empty(), "cfi: probability and derivative lists differ in length");
    double f = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        require(p[i] >= 0.0, "cfi: negative probability");
        if (p[i] > 0.0) {
            f += dp[i] * dp[i] / p[i];
        } else if (dp[i] != 0.0) {
            throw Error("cfi: singular model (zero probability with nonzero derivative)");
        }
    }
    return f;
}

double rmse_bound(double fisher) {
    require(fisher > 0.0, "rmse_bound needs a positive Fisher information");
    return 1.0 / std::sqrt(fisher);
}

double improvement_db(double rmse_ref, double rmse_new) {
    require(rmse_ref > 0.0 && rmse_new > 0.0, "improvement_db needs positive RMSE values");
    return 10.0 * std::log10(rmse_ref / rmse_new);
}

double qfi_dephased_pure(const PureState &psi, const DfsCensus &census, const DiagonalGenerator &g) {
    require(psi.dimension() == census.dimension && g.dimension() == census.dimension,
            "qfi_dephased_pure: dimension mismatch");
    double f = 0.0;
    for (const auto &dfs : census.subspaces) {
        double p = 0.0, m1 = 0.0, m2 = 0.0;
        for (std::size_t k : dfs.members) {
            double w = std::norm(psi[k]);
            p += w;
            m1 += w * g[k];
            m2 += w * g[k] * g[k];
        }
        if (p > 0.0) {
            // p * 4 Var of the renormalized block.
            f += 4.0 * std::max(0.0, m2 - m1 * m1 / p);
        }
    }
    return f;
}

CMatrix parity_observable(std::size_t qubits, double phi_r) {
    require(qubits >= 1, "parity_observable needs at least one qubit");
    // cos(phi) Y - sin(phi) X has off-diagonals -i e^{-i phi} and i e^{i phi}.
    CMatrix sigma = CMatrix::Zero(2, 2);
    sigma(0, 1) = Complex(0, -1) * std::polar(1.0, -phi_r);
    sigma(1, 0) = Complex(0, 1) * std::polar(1.0, phi_r);
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < qubits; ++q) {
        CMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * sigma;
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

std::size_t qubit_count(std::size_t dimension) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dimension) {
        ++n;
    }
    require((std::size_t{1} << n) == dimension && n >= 1, "parity readout needs a register of qubits");
    return n;
}

}  // namespace

DensityMatrix readout_frame(const DensityMatrix &rho) {
    const std::size_t n = qubit_count(rho.dimension());
    CMatrix u = CMatrix::Identity(2, 2);
    u(0, 0) = Complex(0, 1);
    CMatrix big = embed_local(u, 0, n, 2);
    return DensityMatrix(big * rho.matrix() * big.adjoint());
}

DensityMatrix align_register(const DensityMatrix &rho, std::span<const std::size_t> upper) {
    const std::size_t n = qubit_count(rho.dimension());
    require(upper.size() == n, "align_register: one level index per sensor is required");
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    CMatrix m = rho.matrix();
    for (std::size_t q = 0; q < n; ++q) {
        require(upper[q] < 2, "align_register: level index must be 0 or 1");
        if (upper[q] == 0) {
            CMatrix big = embed_local(x, q, n, 2);
            m = big * m * big;
        }
    }
    return DensityMatrix(std::move(m));
}

double parity_expectation(const DensityMatrix &rho, double phi_r) {
    const std::size_t n = qubit_count(rho.dimension());
    DensityMatrix framed = readout_frame(rho);
    return (framed.matrix() * parity_observable(n, phi_r)).trace().real();
}

}  // namespace dfsense
