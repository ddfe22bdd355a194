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
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dfsense/dfs.hpp"
#include "dfsense/statespace.hpp"

namespace dfsense {

/// Separable input state and product observable, flattened to one real
/// vector. Per sensor with n levels: a (n reals), b (n-1 reals; the last
/// imaginary part is fixed to 0), then an n x n Hermitian matrix as n
/// diagonal reals, n(n-1)/2 real and n(n-1)/2 imaginary upper entries.
/// All state blocks come first, then all observable blocks.
class SeparableParams {
   public:
    explicit SeparableParams(std::vector<std::size_t> level_counts);

    static std::size_t state_size(std::size_t n) { return 2 * n - 1; }
    static std::size_t observable_size(std::size_t n) { return n * n; }

    std::size_t size() const { return total_; }
    const std::vector<std::size_t> &level_counts() const { return counts_; }

    /// Normalized single-sensor state of sensor i.
    CVector sensor_state(const std::vector<double> &x, std::size_t i) const;
    /// Hermitian observable of sensor i.
    CMatrix sensor_observable(const std::vector<double> &x, std::size_t i) const;
    /// Parameters of an explicit state and observable set (inverse of the above,
    /// up to state normalization and global phase).
    std::vector<double> pack(const std::vector<CVector> &states, const std::vector<CMatrix> &observables) const;

   private:
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> state_offset_;
    std::vector<std::size_t> observable_offset_;
    std::size_t total_ = 0;
};

/// The sensing problem: levels, the DFS census of the noise, and the signal
/// generator. Evaluation is at B = 0.
class CfiProblem {
   public:
    CfiProblem(SensorLevels levels, DfsCensus census, DiagonalGenerator g);

    const SensorLevels &levels() const { return levels_; }
    const DfsCensus &census() const { return census_; }
    const DiagonalGenerator &generator() const { return g_; }
    const SeparableParams &params() const { return params_; }

    struct Outcomes {
        std::vector<double> p;
        std::vector<double> dp;
        /// Sensors whose observable needed the degeneracy jitter.
        std::size_t jittered = 0;
    };

    /// Outcome probabilities and dp/dB after overwhelming dephasing,
    /// optionally mixed with white noise: p -> (1-eps) p + eps/D.
    Outcomes outcomes(const std::vector<double> &x, double epsilon = 0.0) const;

    /// CFI of the outcome distribution.
    double objective(const std::vector<double> &x, double epsilon = 0.0) const;

   private:
    SensorLevels levels_;
    DfsCensus census_;
    DiagonalGenerator g_;
    SeparableParams params_;
};

/// Eigenvectors of a Hermitian matrix; near-degenerate spectra (gap < 1e-10)
/// get a deterministic 1e-8 * k diagonal jitter first. Returns true if jittered.
bool observable_basis(const CMatrix &h, CMatrix &vectors);

struct NelderMeadOptions {
    std::size_t max_evaluations = 200000;
    /// Stop a simplex cycle once max f - min f over the simplex drops below this.
    double f_tolerance = 1e-12;
    /// Fresh simplex cycles around the incumbent stop when a cycle improves by less.
    double cycle_tolerance = 1e-8;
    double initial_step = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t cycles = 0;
    bool converged = false;
};

/// Maximizes f with the adaptive-coefficient Nelder-Mead simplex, restarting
/// a fresh simplex around the incumbent until a cycle gains < cycle_tolerance.
NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double> &)> &f,
                                      std::vector<double> x0, const NelderMeadOptions &options);

enum class Restriction { FullSixLevel, BoldTwoLevel };

struct OptimizerConfig {
    std::size_t restarts = 10;
    /// Random starts are uniform in [-box, box]^P.
    double box = 1.0;
    NelderMeadOptions simplex;
    double epsilon = 0.0;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct RestartLog {
    std::size_t index = 0;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t cycles = 0;
    bool converged = false;
    std::vector<double> params;
};

struct OptimizeResult {
    std::vector<double> params;
    double best = 0.0;
    std::size_t best_restart = 0;
    std::vector<RestartLog> restarts;
};

/// Constant+gradient noise and quadratic signal on three equidistant sensors,
/// with either the full six-level manifold or the {+-1}x{+-2}x{+-1} restriction.
CfiProblem standard_problem(Restriction restriction, double kappa, double time, double spacing);

OptimizeResult optimize_cfi(const CfiProblem &problem, const OptimizerConfig &config);

/// Objective at fixed parameters with outcome white noise epsilon.
double robustness_check(const CfiProblem &problem, const std::vector<double> &params, double epsilon);

std::string restriction_name(Restriction r);
Restriction parse_restriction(const std::string &name);

}  // namespace dfsense
