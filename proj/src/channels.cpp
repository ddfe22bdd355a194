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

#include "dfsense/channels.hpp"

#include <cmath>

namespace dfsense {

IntegratedNoise IntegratedNoise::gaussian(double sigma) {
    require(sigma >= 0, "Gaussian noise width must be >= 0");
    return {Kind::Gaussian, sigma};
}

IntegratedNoise IntegratedNoise::uniform(double half_width) {
    require(half_width >= 0, "uniform noise half-width must be >= 0");
    return {Kind::Uniform, half_width};
}

double IntegratedNoise::characteristic(double u) const {
    switch (kind) {
        case Kind::Gaussian:
            return std::exp(-0.5 * width * width * u * u);
        case Kind::Uniform: {
            double x = width * u;
            return std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
        }
        case Kind::Overwhelming:
            return std::abs(u) < 1e-12 ? 1.0 : 0.0;
    }
    throw Error("unsupported noise distribution");
}

DensityMatrix overwhelming_dephasing(const DensityMatrix &rho, const DfsCensus &census) {
    require(rho.dimension() == census.dimension, "overwhelming_dephasing: basis mismatch");
    const auto labels = census.labels();
    const auto n = static_cast<Eigen::Index>(rho.dimension());
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            if (r == c || (labels[r] >= 0 && labels[r] == labels[c])) {
                out(r, c) = rho.matrix()(r, c);
            }
        }
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix finite_dephasing(const DensityMatrix &rho, const SensorLevels &levels, const SensorLayout &layout,
                               std::span<const FieldComponent> noise, std::span<const IntegratedNoise> models,
                               double kappa) {
    require(rho.dimension() == levels.dimension(), "finite_dephasing: basis mismatch");
    require(layout.size() == levels.sensor_count(), "finite_dephasing: layout/levels mismatch");
    require(noise.size() == models.size(), "finite_dephasing: one distribution per noise component is required");

    const auto n = static_cast<Eigen::Index>(rho.dimension());
    // energy(j, k) = f_j . s_k for unit-strength noise row j.
    RMatrix energy(static_cast<Eigen::Index>(noise.size()), n);
    for (std::size_t j = 0; j < noise.size(); ++j) {
        RVector f = field_vector(noise[j].unit(), layout);
        for (Eigen::Index k = 0; k < n; ++k) {
            auto s = levels.basis(static_cast<std::size_t>(k));
            double e = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                e += f[static_cast<Eigen::Index>(i)] * s[i];
            }
            energy(static_cast<Eigen::Index>(j), k) = e;
        }
    }

    CMatrix out = rho.matrix();
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            if (r == c) {
                continue;
            }
            double factor = 1.0;
            for (std::size_t j = 0; j < noise.size() && factor != 0.0; ++j) {
                double mismatch = energy(static_cast<Eigen::Index>(j), r) - energy(static_cast<Eigen::Index>(j), c);
                if (models[j].kind == IntegratedNoise::Kind::Overwhelming) {
                    factor *= std::abs(mismatch) < 1e-9 ? 1.0 : 0.0;
                } else {
                    factor *= models[j].characteristic(kappa * mismatch);
                }
            }
            out(r, c) *= factor;
        }
    }
    return DensityMatrix(std::move(out));
}

std::array<CMatrix, 3> qutrit_decay_kraus(double p) {
    require(p >= 0 && p <= 1, "decay probability must lie in [0, 1]");
    CMatrix k0 = CMatrix::Zero(3, 3);
    k0(0, 0) = std::sqrt(1 - p);
    k0(1, 1) = std::sqrt(1 - p);
    k0(2, 2) = 1.0;
    CMatrix k1 = CMatrix::Zero(3, 3);
    k1(0, 1) = std::sqrt(p);
    CMatrix k2 = CMatrix::Zero(3, 3);
    k2(2, 0) = std::sqrt(p);
    return {k0, k1, k2};
}

double decay_probability(double time, double lifetime) {
    require(time >= 0, "decay time must be >= 0");
    require(lifetime > 0, "lifetime must be positive");
    return -std::expm1(-time / lifetime);
}

CMatrix embed_local(const CMatrix &op, std::size_t site, std::size_t sites, std::size_t local_dim) {
    require(site < sites, "embed_local: site out of range");
    require(static_cast<std::size_t>(op.rows()) == local_dim && op.rows() == op.cols(),
            "embed_local: operator has the wrong local dimension");
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < sites; ++i) {
        const CMatrix factor = i == site ? op
                                         : CMatrix::Identity(static_cast<Eigen::Index>(local_dim),
                                                             static_cast<Eigen::Index>(local_dim));
        CMatrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(r * factor.rows(), c * factor.cols(), factor.rows(), factor.cols()) = out(r, c) * factor;
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

std::size_t site_count(std::size_t dimension, std::size_t local_dim) {
    std::size_t sites = 0;
    std::size_t d = 1;
    while (d < dimension) {
        d *= local_dim;
        ++sites;
    }
    require(d == dimension, "state dimension is not a power of the local dimension");
    return sites;
}

}  // namespace

DensityMatrix amplitude_damping_qutrit(const DensityMatrix &rho, double time, double lifetime) {
    require(rho.dimension() == 27, "amplitude_damping_qutrit expects a three-qutrit (27-dim) state");
    const auto kraus = qutrit_decay_kraus(decay_probability(time, lifetime));
    CMatrix m = rho.matrix();
    for (std::size_t site = 0; site < 3; ++site) {
        CMatrix next = CMatrix::Zero(27, 27);
        for (const auto &k : kraus) {
            CMatrix big = embed_local(k, site, 3, 3);
            next += big * m * big.adjoint();
        }
        m = std::move(next);
    }
    return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix qutrit_pi_pulse(const DensityMatrix &rho, std::size_t level_a, std::size_t level_b) {
    require(level_a < 3 && level_b < 3 && level_a != level_b, "qutrit_pi_pulse: invalid level pair");
    const std::size_t sites = site_count(rho.dimension(), 3);
    CMatrix u = CMatrix::Identity(3, 3);
    u(static_cast<Eigen::Index>(level_a), static_cast<Eigen::Index>(level_a)) = 0.0;
    u(static_cast<Eigen::Index>(level_b), static_cast<Eigen::Index>(level_b)) = 0.0;
    u(static_cast<Eigen::Index>(level_a), static_cast<Eigen::Index>(level_b)) = Complex(0, -1);
    u(static_cast<Eigen::Index>(level_b), static_cast<Eigen::Index>(level_a)) = Complex(0, -1);
    CMatrix m = rho.matrix();
    for (std::size_t site = 0; site < sites; ++site) {
        CMatrix big = embed_local(u, site, sites, 3);
        m = big * m * big.adjoint();
    }
    return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix depolarize_independent(const DensityMatrix &rho, std::span<const double> probabilities) {
    const std::size_t sites = site_count(rho.dimension(), 2);
    require(probabilities.size() == sites, "depolarize_independent: one probability per qubit is required");
    for (double p : probabilities) {
        require(p >= 0 && p <= 1, "depolarizing probability must lie in [0, 1]");
    }
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    CMatrix m = rho.matrix();
    for (std::size_t q = 0; q < sites; ++q) {
        // tr_q(rho) (x) I/2 equals the uniform Pauli twirl on qubit q.
        CMatrix twirl = 0.25 * m;
        for (const CMatrix *pauli : {&x, &y, &z}) {
            CMatrix big = embed_local(*pauli, q, sites, 2);
            twirl += 0.25 * big * m * big;
        }
        m = (1.0 - probabilities[q]) * m + probabilities[q] * twirl;
    }
    return DensityMatrix(0.5 * (m + m.adjoint()));
}

double combined_error_probability(double p_pi, double p_addressed) {
    require(p_pi >= 0 && p_pi <= 1 && p_addressed >= 0 && p_addressed <= 1, "error probabilities must lie in [0, 1]");
    return 1.0 - (1.0 - p_pi) * (1.0 - p_addressed);
}

}  // namespace dfsense
