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
#include <random>
#include <span>
#include <vector>

#include "dfsense/metrology.hpp"

namespace dfsense {

struct ShotRecord {
    std::uint64_t shots = 0;
    std::uint64_t plus = 0;

    std::uint64_t minus() const { return shots - plus; }
    /// (N+ - N-) / N.
    double parity() const;
};

/// Seed of the stream for task (a, b) under a master seed; the counter
/// scheme is splitmix64(master ^ splitmix64(a * 2^32 + b)).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

ShotRecord sample_shots(const ParityModel &model, double signal, std::uint64_t shots, std::mt19937_64 &rng);
ShotRecord sample_shots(const ParityModel &model, double signal, std::uint64_t shots, std::uint64_t seed);

/// floor(phase / pi) for the true signal.
long fringe_index(const ParityModel &model, double signal);

/// Closed-form maximum-likelihood estimate for a parity estimate P inside
/// fringe mu. P/A is clamped to [-1, 1].
double mle(double parity, const ParityModel &model, long mu);
double mle(const ShotRecord &record, const ParityModel &model, long mu);

/// sqrt(N/M sum (truth - estimate)^2).
double normalized_rmse(std::span<const double> estimates, double truth, std::uint64_t shots);

/// Exact sampling moments of the estimator by enumerating all N+1 outcomes.
struct EstimatorMoments {
    double bias = 0.0;
    double mse = 0.0;
    /// d E[estimate] / dB.
    double mean_slope = 1.0;
};
EstimatorMoments exact_moments(const ParityModel &model, double signal, std::uint64_t shots);

/// Analysis phases phi_r whose total phase satisfies |mod_pi(phase) - pi/2| <= half_width.
std::vector<double> select_phases(const ParityModel &model, double signal, std::span<const double> grid,
                                  double half_width);

/// n points from 0 to `stop` inclusive.
std::vector<double> linear_grid(double stop, std::size_t n);

struct Histogram {
    double low = 0.0;
    double high = 0.0;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;
};
Histogram make_histogram(std::span<const double> values, double low, double high, std::size_t bins);

struct CampaignConfig {
    std::vector<double> signals;
    std::vector<double> phase_grid;
    std::uint64_t shots = 72;
    std::size_t repeats = 500;
    double window = 0.73;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::size_t histogram_bins = 24;
};

struct SignalResult {
    double truth = 0.0;
    std::vector<double> phases;
    std::vector<double> estimates;
    double mean = 0.0;
    /// Standard error of the mean.
    double mean_se = 0.0;
    double rmse = 0.0;
    /// Delta-method standard error of the RMSE.
    double rmse_se = 0.0;
    Histogram histogram;
};

struct CampaignResult {
    ParityModel model;
    std::uint64_t shots = 0;
    std::vector<SignalResult> signals;
    /// Inverse-variance weighted mean of the per-signal RMSE values.
    double average_rmse = 0.0;
    double average_rmse_se = 0.0;
};

/// For every signal, M estimates of N shots each; estimate k uses the
/// (k mod n)-th selected analysis phase and its own RNG stream.
CampaignResult run_campaign(const ParityModel &model, const CampaignConfig &config);

/// (pi / sqrt(12)) / omega: the RMSE of a uniform phase guess on +-pi/2.
double random_guess_rmse(double frequency);

/// Window-averaged Cramer-Rao line sqrt(mean(1/CFI)) over the selected
/// phases of every signal.
double window_cr_rmse(const ParityModel &model, std::span<const double> signals, std::span<const double> grid,
                      double half_width);

struct ScalingRow {
    std::uint64_t shots = 0;
    std::vector<double> rmse;
    std::vector<double> rmse_se;
    /// improvement_db(rmse[1], rmse[0]); NaN with fewer than two models.
    double improvement_db = 0.0;
    double improvement_db_se = 0.0;
};

/// Average RMSE of each model on a grid of shot numbers.
std::vector<ScalingRow> shots_scaling(std::span<const ParityModel> models, std::span<const std::uint64_t> shot_grid,
                                      const CampaignConfig &base);

struct ParityFit {
    double amplitude = 0.0;
    double offset = 0.0;
    double residual_rms = 0.0;
};

/// Least-squares fit of A and phi_0 in P = A cos(omega B + 3 phi_r + phi_0).
ParityFit fit_parity(std::span<const double> phases, std::span<const double> parities, double frequency,
                     double signal);

}  // namespace dfsense
