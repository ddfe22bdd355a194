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

#include "dfsense/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dfsense/estimation.hpp"
#include "dfsense/fields.hpp"
#include "parallel.hpp"

namespace dfsense {

SeparableParams::SeparableParams(std::vector<std::size_t> level_counts) : counts_(std::move(level_counts)) {
    require(!counts_.empty(), "separable parameters need at least one sensor");
    std::size_t offset = 0;
    for (std::size_t n : counts_) {
        require(n >= 1, "every sensor needs at least one level");
        state_offset_.push_back(offset);
        offset += state_size(n);
    }
    for (std::size_t n : counts_) {
        observable_offset_.push_back(offset);
        offset += observable_size(n);
    }
    total_ = offset;
}

CVector SeparableParams::sensor_state(const std::vector<double> &x, std::size_t i) const {
    require(x.size() == total_, "parameter vector has the wrong length");
    const std::size_t n = counts_[i];
    const double *p = x.data() + state_offset_[i];
    CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        double im = k + 1 < n ? p[n + k] : 0.0;
        v[static_cast<Eigen::Index>(k)] = Complex(p[k], im);
    }
    double norm = v.norm();
    if (!(norm > 1e-300)) {
        v.setZero();
        v[0] = 1.0;
        return v;
    }
    return v / norm;
}

CMatrix SeparableParams::sensor_observable(const std::vector<double> &x, std::size_t i) const {
    require(x.size() == total_, "parameter vector has the wrong length");
    const auto n = static_cast<Eigen::Index>(counts_[i]);
    const double *p = x.data() + observable_offset_[i];
    const std::size_t upper = counts_[i] * (counts_[i] - 1) / 2;
    CMatrix h = CMatrix::Zero(n, n);
    std::size_t u = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
        h(r, r) = p[r];
        for (Eigen::Index c = r + 1; c < n; ++c, ++u) {
            h(r, c) = Complex(p[counts_[i] + u], p[counts_[i] + upper + u]);
            h(c, r) = std::conj(h(r, c));
        }
    }
    return h;
}

std::vector<double> SeparableParams::pack(const std::vector<CVector> &states,
                                          const std::vector<CMatrix> &observables) const {
    require(states.size() == counts_.size() && observables.size() == counts_.size(),
            "pack: one state and one observable per sensor");
    std::vector<double> x(total_, 0.0);
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const std::size_t n = counts_[i];
        require(static_cast<std::size_t>(states[i].size()) == n, "pack: state has the wrong dimension");
        // Rotate the global phase so the last amplitude is real.
        Complex last = states[i][static_cast<Eigen::Index>(n - 1)];
        Complex phase = std::abs(last) > 0 ? std::conj(last) / std::abs(last) : Complex(1.0);
        CVector v = states[i] * phase;
        for (std::size_t k = 0; k < n; ++k) {
            x[state_offset_[i] + k] = v[static_cast<Eigen::Index>(k)].real();
            if (k + 1 < n) {
                x[state_offset_[i] + n + k] = v[static_cast<Eigen::Index>(k)].imag();
            }
        }
        const CMatrix &h = observables[i];
        require(static_cast<std::size_t>(h.rows()) == n && h.cols() == h.rows(),
                "pack: observable has the wrong dimension");
        const std::size_t upper = n * (n - 1) / 2;
        std::size_t u = 0;
        for (std::size_t r = 0; r < n; ++r) {
            x[observable_offset_[i] + r] = h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
            for (std::size_t c = r + 1; c < n; ++c, ++u) {
                Complex z = h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                x[observable_offset_[i] + n + u] = z.real();
                x[observable_offset_[i] + n + upper + u] = z.imag();
            }
        }
    }
    return x;
}

namespace {

std::vector<std::size_t> level_counts(const SensorLevels &levels) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < levels.sensor_count(); ++i) {
        out.push_back(levels.levels(i));
    }
    return out;
}

}  // namespace

CfiProblem::CfiProblem(SensorLevels levels, DfsCensus census, DiagonalGenerator g)
    : levels_(std::move(levels)), census_(std::move(census)), g_(std::move(g)), params_(level_counts(levels_)) {
    require(census_.dimension == levels_.dimension() && g_.dimension() == levels_.dimension(),
            "CfiProblem: census, generator and levels disagree on the dimension");
}

bool observable_basis(const CMatrix &h, CMatrix &vectors) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const RVector &ev = es.eigenvalues();
    bool degenerate = false;
    for (Eigen::Index k = 1; k < ev.size(); ++k) {
        if (ev[k] - ev[k - 1] < 1e-10) {
            degenerate = true;
        }
    }
    if (!degenerate) {
        vectors = es.eigenvectors();
        return false;
    }
    CMatrix jittered = h;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        jittered(k, k) += 1e-8 * static_cast<double>(k);
    }
    es.compute(jittered);
    vectors = es.eigenvectors();
    return true;
}

CfiProblem::Outcomes CfiProblem::outcomes(const std::vector<double> &x, double epsilon) const {
    require(epsilon >= 0.0 && epsilon <= 1.0, "white-noise probability must lie in [0, 1]");
    const std::size_t sensors = levels_.sensor_count();
    const auto dim = static_cast<Eigen::Index>(levels_.dimension());
    Outcomes out;

    std::vector<CVector> states(sensors);
    std::vector<CMatrix> bases(sensors);
    for (std::size_t i = 0; i < sensors; ++i) {
        states[i] = params_.sensor_state(x, i);
        if (observable_basis(params_.sensor_observable(x, i), bases[i])) {
            ++out.jittered;
        }
    }
    // Product state and product eigenbasis (sensor 0 most significant).
    CVector psi = states[0];
    CMatrix v = bases[0];
    for (std::size_t i = 1; i < sensors; ++i) {
        CVector np(psi.size() * states[i].size());
        for (Eigen::Index a = 0; a < psi.size(); ++a) {
            np.segment(a * states[i].size(), states[i].size()) = psi[a] * states[i];
        }
        psi = std::move(np);
        CMatrix nv(v.rows() * bases[i].rows(), v.cols() * bases[i].cols());
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            for (Eigen::Index c = 0; c < v.cols(); ++c) {
                nv.block(r * bases[i].rows(), c * bases[i].cols(), bases[i].rows(), bases[i].cols()) =
                    v(r, c) * bases[i];
            }
        }
        v = std::move(nv);
    }

    // Inside each DFS the dephased state stays pure, so
    // p_m = sum_eta |a_eta,m|^2 + sum_{s in remainder} |psi_s|^2 |V_sm|^2 and
    // dp_m = 2 sum_eta Im(conj(a_eta,m) b_eta,m) with b carrying a factor G_s.
    RVector p = RVector::Zero(dim);
    RVector dp = RVector::Zero(dim);
    CVector a(dim), b(dim);
    for (const auto &dfs : census_.subspaces) {
        a.setZero();
        b.setZero();
        for (std::size_t s : dfs.members) {
            const auto si = static_cast<Eigen::Index>(s);
            const Complex amp = psi[si];
            const double gs = g_.eigenvalues[si];
            for (Eigen::Index m = 0; m < dim; ++m) {
                Complex t = std::conj(v(si, m)) * amp;
                a[m] += t;
                b[m] += gs * t;
            }
        }
        for (Eigen::Index m = 0; m < dim; ++m) {
            p[m] += std::norm(a[m]);
            dp[m] += 2.0 * (std::conj(a[m]) * b[m]).imag();
        }
    }
    for (std::size_t s : census_.remainder) {
        const auto si = static_cast<Eigen::Index>(s);
        const double w = std::norm(psi[si]);
        for (Eigen::Index m = 0; m < dim; ++m) {
            p[m] += w * std::norm(v(si, m));
        }
    }
    const double uniform = epsilon / static_cast<double>(dim);
    out.p.resize(static_cast<std::size_t>(dim));
    out.dp.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index m = 0; m < dim; ++m) {
        out.p[static_cast<std::size_t>(m)] = (1.0 - epsilon) * p[m] + uniform;
        out.dp[static_cast<std::size_t>(m)] = (1.0 - epsilon) * dp[m];
    }
    return out;
}

double CfiProblem::objective(const std::vector<double> &x, double epsilon) const {
    Outcomes o = outcomes(x, epsilon);
    double f = 0.0;
    for (std::size_t m = 0; m < o.p.size(); ++m) {
        double num = o.dp[m] * o.dp[m];
        if (o.p[m] < 1e-12) {
            if (num < 1e-12) {
                continue;
            }
            throw Error("cfi_objective: singular outcome (vanishing probability, nonzero derivative)");
        }
        f += num / o.p[m];
    }
    return f;
}

NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double> &)> &f,
                                      std::vector<double> x0, const NelderMeadOptions &options) {
    const std::size_t n = x0.size();
    require(n >= 1, "nelder_mead_maximize needs at least one parameter");
    const double dn = static_cast<double>(n);
    // Dimension-adaptive coefficients.
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    NelderMeadResult res;
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evaluations = 1;
    auto eval = [&](const std::vector<double> &x) {
        ++res.evaluations;
        return f(x);
    };

    double step = options.initial_step;
    while (res.evaluations < options.max_evaluations) {
        ++res.cycles;
        const double start_value = res.value;
        std::vector<std::vector<double>> simplex(n + 1, res.x);
        std::vector<double> values(n + 1, res.value);
        for (std::size_t i = 0; i < n; ++i) {
            simplex[i + 1][i] += step;
            values[i + 1] = eval(simplex[i + 1]);
        }
        std::vector<std::size_t> order(n + 1);
        std::vector<double> centroid(n), trial(n), trial2(n);
        while (res.evaluations < options.max_evaluations) {
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[n - 1];
            if (values[best] - values[worst] < options.f_tolerance) {
                break;
            }
            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                const auto &row = simplex[order[k]];
                for (std::size_t j = 0; j < n; ++j) {
                    centroid[j] += row[j];
                }
            }
            for (double &c : centroid) {
                c /= dn;
            }
            for (std::size_t j = 0; j < n; ++j) {
                trial[j] = centroid[j] + alpha * (centroid[j] - simplex[worst][j]);
            }
            double fr = eval(trial);
            if (fr > values[best]) {
                for (std::size_t j = 0; j < n; ++j) {
                    trial2[j] = centroid[j] + beta * (trial[j] - centroid[j]);
                }
                double fe = eval(trial2);
                if (fe > fr) {
                    simplex[worst] = trial2;
                    values[worst] = fe;
                } else {
                    simplex[worst] = trial;
                    values[worst] = fr;
                }
                continue;
            }
            if (fr > values[second]) {
                simplex[worst] = trial;
                values[worst] = fr;
                continue;
            }
            const bool outside = fr > values[worst];
            for (std::size_t j = 0; j < n; ++j) {
                trial2[j] = outside ? centroid[j] + gamma * (trial[j] - centroid[j])
                                    : centroid[j] - gamma * (centroid[j] - simplex[worst][j]);
            }
            double fc = eval(trial2);
            if (fc > (outside ? fr : values[worst])) {
                simplex[worst] = trial2;
                values[worst] = fc;
                continue;
            }
            for (std::size_t k = 1; k <= n; ++k) {
                auto &row = simplex[order[k]];
                for (std::size_t j = 0; j < n; ++j) {
                    row[j] = simplex[best][j] + delta * (row[j] - simplex[best][j]);
                }
                values[order[k]] = eval(row);
            }
        }
        const auto top = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
        if (values[top] > res.value) {
            res.value = values[top];
            res.x = simplex[top];
        }
        if (res.value - start_value < options.cycle_tolerance) {
            res.converged = true;
            break;
        }
        step = std::max(step * 0.5, 1e-3);
    }
    return res;
}

CfiProblem standard_problem(Restriction restriction, double kappa, double time, double spacing) {
    SensorLevels levels = restriction == Restriction::FullSixLevel ? SensorLevels::d52(3) : SensorLevels::bold();
    SensorLayout layout = SensorLayout::equidistant(3, spacing);
    std::vector<FieldComponent> noise{FieldComponent::polynomial(0), FieldComponent::polynomial(1)};
    DfsCensus census = enumerate_dfs(levels, layout, noise);
    DiagonalGenerator g = build_signal_generator(layout, FieldComponent::polynomial(2), kappa, time, levels);
    return CfiProblem(std::move(levels), std::move(census), std::move(g));
}

OptimizeResult optimize_cfi(const CfiProblem &problem, const OptimizerConfig &config) {
    require(config.restarts >= 1, "optimizer needs at least one restart");
    require(config.box > 0.0, "parameter box must be positive");
    const std::size_t dim = problem.params().size();
    std::vector<NelderMeadResult> runs(config.restarts);
    detail::parallel_for(config.restarts, config.threads, [&](std::size_t r) {
        std::mt19937_64 rng(stream_seed(config.seed, r, 0));
        std::uniform_real_distribution<double> u(-config.box, config.box);
        std::vector<double> x0(dim);
        for (double &v : x0) {
            v = u(rng);
        }
        auto f = [&](const std::vector<double> &x) { return problem.objective(x, config.epsilon); };
        runs[r] = nelder_mead_maximize(f, std::move(x0), config.simplex);
    });
    OptimizeResult out;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        out.restarts.push_back({r, runs[r].value, runs[r].evaluations, runs[r].cycles, runs[r].converged, runs[r].x});
        if (r == 0 || runs[r].value > out.best) {
            out.best = runs[r].value;
            out.best_restart = r;
            out.params = runs[r].x;
        }
    }
    return out;
}

double robustness_check(const CfiProblem &problem, const std::vector<double> &params, double epsilon) {
    return problem.objective(params, epsilon);
}

std::string restriction_name(Restriction r) {
    return r == Restriction::FullSixLevel ? "full-six-level" : "bold-two-level";
}

Restriction parse_restriction(const std::string &name) {
    if (name == "full-six-level") {
        return Restriction::FullSixLevel;
    }
    if (name == "bold-two-level") {
        return Restriction::BoldTwoLevel;
    }
    throw Error("unknown restriction '" + name + "' (expected full-six-level or bold-two-level)");
}

}  // namespace dfsense
