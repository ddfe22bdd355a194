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

#include "dfsense/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dfsense/estimation.hpp"
#include "parallel.hpp"

namespace dfsense {

namespace {

std::size_t qubits_of(std::size_t dimension) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dimension) {
        ++n;
    }
    require((std::size_t{1} << n) == dimension && n >= 1, "tomography needs a register of qubits");
    return n;
}

std::vector<std::uint64_t> multinomial(std::span<const double> p, std::uint64_t shots, std::mt19937_64 &rng) {
    std::vector<std::uint64_t> out(p.size(), 0);
    double rest = 1.0;
    std::uint64_t left = shots;
    for (std::size_t k = 0; k + 1 < p.size() && left > 0; ++k) {
        double q = rest > 0.0 ? std::clamp(p[k] / rest, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(left, q);
        out[k] = draw(rng);
        left -= out[k];
        rest -= p[k];
    }
    out.back() += left;
    return out;
}

struct Frame {
    CMatrix rotation;
    std::vector<double> frequencies;
    double weight = 0.0;
};

std::vector<Frame> frames_of(std::span<const BasisCounts> counts, std::size_t &qubits, double &total) {
    require(!counts.empty(), "reconstruct_mle: no counts");
    const std::size_t dim = counts.front().counts.size();
    qubits = qubits_of(dim);
    const auto expected = pauli_bases(qubits);
    require(counts.size() == expected.size(), "reconstruct_mle: every Pauli basis must be present");
    std::vector<std::string> seen;
    total = 0.0;
    std::vector<Frame> frames;
    for (const auto &c : counts) {
        require(c.counts.size() == dim, "reconstruct_mle: inconsistent outcome counts");
        seen.push_back(c.basis);
        Frame f;
        f.rotation = basis_rotation(c.basis);
        for (auto n : c.counts) {
            f.frequencies.push_back(static_cast<double>(n));
        }
        total += static_cast<double>(c.shots());
        frames.push_back(std::move(f));
    }
    std::sort(seen.begin(), seen.end());
    require(seen == expected, "reconstruct_mle: every Pauli basis must be present exactly once");
    require(total > 0.0, "reconstruct_mle: no shots recorded");
    return frames;
}

double loglike_frames(const CMatrix &rho, const std::vector<Frame> &frames) {
    double l = 0.0;
    for (const auto &f : frames) {
        CMatrix r = f.rotation * rho * f.rotation.adjoint();
        for (std::size_t k = 0; k < f.frequencies.size(); ++k) {
            if (f.frequencies[k] > 0.0) {
                double p = std::max(r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real(), 1e-300);
                l += f.frequencies[k] * std::log(p);
            }
        }
    }
    return l;
}

CMatrix normalized(const CMatrix &m) {
    CMatrix h = 0.5 * (m + m.adjoint());
    return h / h.trace().real();
}

}  // namespace

std::uint64_t BasisCounts::shots() const {
    std::uint64_t s = 0;
    for (auto c : counts) {
        s += c;
    }
    return s;
}

std::vector<std::string> pauli_bases(std::size_t qubits) {
    require(qubits >= 1 && qubits <= 8, "pauli_bases supports 1 to 8 qubits");
    std::vector<std::string> out{""};
    for (std::size_t q = 0; q < qubits; ++q) {
        std::vector<std::string> next;
        for (const auto &prefix : out) {
            for (char c : {'X', 'Y', 'Z'}) {
                next.push_back(prefix + c);
            }
        }
        out = std::move(next);
    }
    return out;
}

CMatrix basis_rotation(const std::string &basis) {
    require(!basis.empty(), "empty basis label");
    const double h = M_SQRT1_2;
    CMatrix out = CMatrix::Identity(1, 1);
    for (char c : basis) {
        CMatrix u(2, 2);
        switch (c) {
            case 'X':
                u << h, h, h, -h;
                break;
            case 'Y':
                // H S^dagger
                u << h, Complex(0, -h), h, Complex(0, h);
                break;
            case 'Z':
                u = CMatrix::Identity(2, 2);
                break;
            default:
                throw Error(std::string("unknown Pauli basis letter '") + c + "'");
        }
        CMatrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index col = 0; col < out.cols(); ++col) {
                next.block(2 * r, 2 * col, 2, 2) = out(r, col) * u;
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<double> basis_probabilities(const DensityMatrix &rho, const std::string &basis) {
    require(basis.size() == qubits_of(rho.dimension()), "basis label length does not match the register");
    CMatrix u = basis_rotation(basis);
    CMatrix r = u * rho.matrix() * u.adjoint();
    std::vector<double> p(rho.dimension());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::max(0.0, r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real());
        sum += p[k];
    }
    for (double &v : p) {
        v /= sum;
    }
    return p;
}

BasisCounts simulate_basis_counts(const DensityMatrix &rho, const std::string &basis, std::uint64_t shots,
                                  std::uint64_t seed) {
    auto p = basis_probabilities(rho, basis);
    std::mt19937_64 rng(seed);
    return {basis, multinomial(p, shots, rng)};
}

std::vector<BasisCounts> simulate_tomography(const DensityMatrix &rho, std::uint64_t shots, std::uint64_t seed) {
    std::vector<BasisCounts> out;
    const auto bases = pauli_bases(qubits_of(rho.dimension()));
    for (std::size_t k = 0; k < bases.size(); ++k) {
        out.push_back(simulate_basis_counts(rho, bases[k], shots, stream_seed(seed, k, 0)));
    }
    return out;
}

std::vector<BasisCounts> expected_tomography(const DensityMatrix &rho, std::uint64_t shots) {
    std::vector<BasisCounts> out;
    for (const auto &b : pauli_bases(qubits_of(rho.dimension()))) {
        BasisCounts c{b, {}};
        for (double p : basis_probabilities(rho, b)) {
            c.counts.push_back(static_cast<std::uint64_t>(std::llround(p * static_cast<double>(shots))));
        }
        out.push_back(std::move(c));
    }
    return out;
}

double log_likelihood(const DensityMatrix &rho, std::span<const BasisCounts> counts) {
    std::size_t qubits = 0;
    double total = 0.0;
    auto frames = frames_of(counts, qubits, total);
    require(rho.dimension() == (std::size_t{1} << qubits), "log_likelihood: dimension mismatch");
    return loglike_frames(rho.matrix(), frames);
}

Reconstruction reconstruct_mle(std::span<const BasisCounts> counts, const MleOptions &options) {
    std::size_t qubits = 0;
    double total = 0.0;
    auto frames = frames_of(counts, qubits, total);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits);
    const CMatrix id = CMatrix::Identity(dim, dim);

    CMatrix rho = id / static_cast<double>(dim);
    double l = loglike_frames(rho, frames);
    Reconstruction out;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        // R = sum_j (f_j / p_j) Pi_j, scaled so that R = I at the fixed point.
        CMatrix r = CMatrix::Zero(dim, dim);
        for (const auto &f : frames) {
            CMatrix rotated = f.rotation * rho * f.rotation.adjoint();
            RVector w = RVector::Zero(dim);
            for (Eigen::Index k = 0; k < dim; ++k) {
                double fk = f.frequencies[static_cast<std::size_t>(k)];
                if (fk > 0.0) {
                    w[k] = fk / std::max(rotated(k, k).real(), 1e-300);
                }
            }
            r += f.rotation.adjoint() * w.asDiagonal() * f.rotation;
        }
        r /= total;
        CMatrix candidate = normalized(r * rho * r);
        double lc = loglike_frames(candidate, frames);
        for (double eps = 1.0; lc < l && eps > 1e-8; eps *= 0.5) {
            CMatrix step = id + eps * r;
            candidate = normalized(step * rho * step);
            lc = loglike_frames(candidate, frames);
        }
        out.iterations = it + 1;
        if (lc < l) {
            break;
        }
        const double change = lc - l;
        rho = std::move(candidate);
        l = lc;
        if (change <= options.tolerance * std::abs(l)) {
            out.rho = DensityMatrix(rho);
            out.log_likelihood = l;
            return out;
        }
    }
    out.capped = out.iterations >= options.max_iterations;
    out.rho = DensityMatrix(rho);
    out.log_likelihood = l;
    return out;
}

double ghz_fidelity(const DensityMatrix &rho, std::size_t a, std::size_t b) {
    require(a < rho.dimension() && b < rho.dimension() && a != b, "ghz_fidelity: invalid basis pair");
    return 0.5 * (rho(a, a).real() + rho(b, b).real()) + std::abs(rho(a, b));
}

double coherence_amplitude(const DensityMatrix &rho, std::size_t a, std::size_t b) {
    require(a < rho.dimension() && b < rho.dimension() && a != b, "coherence_amplitude: invalid basis pair");
    return 2.0 * std::abs(rho(a, b));
}

BootstrapResult bootstrap_errorbars(std::span<const BasisCounts> counts,
                                    const std::function<double(const DensityMatrix &)> &extractor,
                                    std::size_t repeats, std::uint64_t seed, std::size_t threads,
                                    const MleOptions &options) {
    require(repeats >= 2, "bootstrap needs at least two repeats");
    BootstrapResult out;
    out.value = extractor(reconstruct_mle(counts, options).rho);
    out.samples.assign(repeats, 0.0);
    detail::parallel_for(repeats, threads, [&](std::size_t r) {
        std::vector<BasisCounts> resampled;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const auto &c = counts[k];
            const double n = static_cast<double>(c.shots());
            std::vector<double> p;
            for (auto v : c.counts) {
                p.push_back(n > 0 ? static_cast<double>(v) / n : 0.0);
            }
            std::mt19937_64 rng(stream_seed(seed, r, k));
            resampled.push_back({c.basis, multinomial(p, c.shots(), rng)});
        }
        out.samples[r] = extractor(reconstruct_mle(resampled, options).rho);
    });
    double mean = 0.0;
    for (double s : out.samples) {
        mean += s;
    }
    mean /= static_cast<double>(repeats);
    double var = 0.0;
    for (double s : out.samples) {
        var += (s - mean) * (s - mean);
    }
    out.std = std::sqrt(var / static_cast<double>(repeats - 1));
    return out;
}

}  // namespace dfsense
