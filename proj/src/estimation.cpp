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

#include "dfsense/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"

namespace dfsense {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double mod_pi(double x) {
    double r = std::fmod(x, M_PI);
    return r < 0 ? r + M_PI : r;
}

}  // namespace

double ShotRecord::parity() const {
    require(shots >= 1 && plus <= shots, "invalid shot record");
    return (static_cast<double>(plus) - static_cast<double>(shots - plus)) / static_cast<double>(shots);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return splitmix64(master ^ splitmix64((a << 32) + b));
}

ShotRecord sample_shots(const ParityModel &model, double signal, std::uint64_t shots, std::mt19937_64 &rng) {
    require(shots >= 1, "N must be >= 1");
    double p = std::clamp(model.p_plus(signal), 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(shots, p);
    return {shots, draw(rng)};
}

ShotRecord sample_shots(const ParityModel &model, double signal, std::uint64_t shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_shots(model, signal, shots, rng);
}

long fringe_index(const ParityModel &model, double signal) {
    return static_cast<long>(std::floor(model.phase(signal) / M_PI));
}

double mle(double parity, const ParityModel &model, long mu) {
    require(model.amplitude > 0.0, "mle: amplitude must be nonzero");
    double x = parity / model.amplitude;
    // Clamped branches: arccos(-1) = pi, arccos(1) = 0.
    double angle = x <= -1.0 ? M_PI : (x >= 1.0 ? 0.0 : std::acos(x));
    double base = 2.0 * M_PI * std::ceil(static_cast<double>(mu) / 2.0);
    double sign = (mu % 2 == 0) ? 1.0 : -1.0;
    return (base - 3.0 * model.analysis_phase - model.offset + sign * angle) / model.frequency;
}

double mle(const ShotRecord &record, const ParityModel &model, long mu) { return mle(record.parity(), model, mu); }

double normalized_rmse(std::span<const double> estimates, double truth, std::uint64_t shots) {
    require(!estimates.empty(), "normalized_rmse needs at least one estimate");
    double acc = 0.0;
    for (double e : estimates) {
        acc += (truth - e) * (truth - e);
    }
    return std::sqrt(static_cast<double>(shots) * acc / static_cast<double>(estimates.size()));
}

EstimatorMoments exact_moments(const ParityModel &model, double signal, std::uint64_t shots) {
    require(shots >= 1, "N must be >= 1");
    const long mu = fringe_index(model, signal);
    const double p = std::clamp(model.p_plus(signal), 0.0, 1.0);
    const double dp = 0.5 * model.parity_slope(signal);
    const double n = static_cast<double>(shots);
    const double lg = std::lgamma(n + 1.0);
    double mean = 0.0, second = 0.0, slope = 0.0;
    for (std::uint64_t k = 0; k <= shots; ++k) {
        const double kk = static_cast<double>(k);
        double pmf;
        if (p <= 0.0) {
            pmf = k == 0 ? 1.0 : 0.0;
        } else if (p >= 1.0) {
            pmf = k == shots ? 1.0 : 0.0;
        } else {
            pmf = std::exp(lg - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * std::log(p) +
                           (n - kk) * std::log1p(-p));
        }
        if (pmf == 0.0) {
            continue;
        }
        double est = mle((2.0 * kk - n) / n, model, mu);
        double err = est - signal;
        mean += pmf * err;
        second += pmf * err * err;
        if (p > 0.0 && p < 1.0) {
            slope += est * pmf * (kk - n * p) / (p * (1.0 - p)) * dp;
        }
    }
    return {mean, second, (p > 0.0 && p < 1.0) ? slope : 0.0};
}

std::vector<double> select_phases(const ParityModel &model, double signal, std::span<const double> grid,
                                  double half_width) {
    require(half_width > 0.0 && half_width <= M_PI / 2 + 1e-15, "phase window half-width must lie in (0, pi/2]");
    std::vector<double> out;
    for (double phi : grid) {
        double total = model.with_phase(phi).phase(signal);
        if (std::abs(mod_pi(total) - M_PI / 2) <= half_width + 1e-12) {
            out.push_back(phi);
        }
    }
    return out;
}

std::vector<double> linear_grid(double stop, std::size_t n) {
    require(n >= 2, "a grid needs at least two points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = stop * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

Histogram make_histogram(std::span<const double> values, double low, double high, std::size_t bins) {
    require(high > low && bins >= 1, "histogram needs a nonempty range and at least one bin");
    Histogram h{low, high, std::vector<std::size_t>(bins, 0), 0, 0};
    const double width = (high - low) / static_cast<double>(bins);
    for (double v : values) {
        if (v < low) {
            ++h.underflow;
        } else if (v >= high) {
            ++h.overflow;
        } else {
            auto b = std::min(bins - 1, static_cast<std::size_t>((v - low) / width));
            ++h.counts[b];
        }
    }
    return h;
}

CampaignResult run_campaign(const ParityModel &model, const CampaignConfig &config) {
    model.validate();
    require(model.amplitude > 0.0, "run_campaign: amplitude must be nonzero");
    require(!config.signals.empty(), "run_campaign: no signals");
    require(config.shots >= 1, "N must be >= 1");
    require(config.repeats >= 1, "M must be >= 1");

    const std::size_t ns = config.signals.size();
    std::vector<std::vector<double>> phases(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        phases[s] = select_phases(model, config.signals[s], config.phase_grid, config.window);
        if (phases[s].empty()) {
            throw Error("run_campaign: no analysis phase falls inside the window for signal " +
                        std::to_string(config.signals[s]));
        }
    }

    std::vector<std::vector<double>> estimates(ns, std::vector<double>(config.repeats));
    detail::parallel_for(ns * config.repeats, config.threads, [&](std::size_t task) {
        const std::size_t s = task / config.repeats;
        const std::size_t k = task % config.repeats;
        const double truth = config.signals[s];
        const ParityModel m = model.with_phase(phases[s][k % phases[s].size()]);
        std::mt19937_64 rng(stream_seed(config.seed, s, k));
        ShotRecord rec = sample_shots(m, truth, config.shots, rng);
        estimates[s][k] = mle(rec, m, fringe_index(m, truth));
    });

    CampaignResult result;
    result.model = model;
    result.shots = config.shots;
    const double n = static_cast<double>(config.shots);
    const double reps = static_cast<double>(config.repeats);
    double wsum = 0.0, wacc = 0.0, plain = 0.0;
    bool weighted = true;
    for (std::size_t s = 0; s < ns; ++s) {
        SignalResult r;
        r.truth = config.signals[s];
        r.phases = phases[s];
        r.estimates = std::move(estimates[s]);
        r.mean = std::accumulate(r.estimates.begin(), r.estimates.end(), 0.0) / reps;
        double var = 0.0, m2 = 0.0, m4 = 0.0;
        for (double e : r.estimates) {
            var += (e - r.mean) * (e - r.mean);
            double sq = (e - r.truth) * (e - r.truth);
            m2 += sq;
            m4 += sq * sq;
        }
        m2 /= reps;
        r.mean_se = config.repeats > 1 ? std::sqrt(var / (reps - 1.0) / reps) : 0.0;
        r.rmse = std::sqrt(n * m2);
        double var_sq = config.repeats > 1 ? std::max(0.0, (m4 / reps - m2 * m2) * reps / (reps - 1.0)) : 0.0;
        r.rmse_se = r.rmse > 0.0 ? n * std::sqrt(var_sq / reps) / (2.0 * r.rmse) : 0.0;
        r.histogram = make_histogram(r.estimates, r.truth - M_PI / model.frequency,
                                     r.truth + M_PI / model.frequency, config.histogram_bins);
        plain += r.rmse;
        if (r.rmse_se > 0.0) {
            double w = 1.0 / (r.rmse_se * r.rmse_se);
            wsum += w;
            wacc += w * r.rmse;
        } else {
            weighted = false;
        }
        result.signals.push_back(std::move(r));
    }
    if (weighted && wsum > 0.0) {
        result.average_rmse = wacc / wsum;
        result.average_rmse_se = 1.0 / std::sqrt(wsum);
    } else {
        result.average_rmse = plain / static_cast<double>(ns);
        result.average_rmse_se = 0.0;
    }
    return result;
}

double random_guess_rmse(double frequency) {
    require(frequency > 0.0, "frequency must be positive");
    return M_PI / std::sqrt(12.0) / frequency;
}

double window_cr_rmse(const ParityModel &model, std::span<const double> signals, std::span<const double> grid,
                      double half_width) {
    double acc = 0.0;
    std::size_t count = 0;
    for (double b : signals) {
        for (double phi : select_phases(model, b, grid, half_width)) {
            acc += 1.0 / model.with_phase(phi).cfi(b);
            ++count;
        }
    }
    require(count > 0, "window_cr_rmse: empty phase selection");
    return std::sqrt(acc / static_cast<double>(count));
}

std::vector<ScalingRow> shots_scaling(std::span<const ParityModel> models, std::span<const std::uint64_t> shot_grid,
                                      const CampaignConfig &base) {
    require(!models.empty(), "shots_scaling needs at least one model");
    std::vector<ScalingRow> rows;
    for (std::size_t i = 0; i < shot_grid.size(); ++i) {
        ScalingRow row;
        row.shots = shot_grid[i];
        for (std::size_t m = 0; m < models.size(); ++m) {
            CampaignConfig cfg = base;
            cfg.shots = shot_grid[i];
            cfg.seed = stream_seed(base.seed, i, m);
            CampaignResult r = run_campaign(models[m], cfg);
            row.rmse.push_back(r.average_rmse);
            row.rmse_se.push_back(r.average_rmse_se);
        }
        if (models.size() >= 2) {
            row.improvement_db = improvement_db(row.rmse[1], row.rmse[0]);
            double rel0 = row.rmse_se[0] / row.rmse[0];
            double rel1 = row.rmse_se[1] / row.rmse[1];
            row.improvement_db_se = 10.0 / std::log(10.0) * std::sqrt(rel0 * rel0 + rel1 * rel1);
        } else {
            row.improvement_db = std::numeric_limits<double>::quiet_NaN();
            row.improvement_db_se = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ParityFit fit_parity(std::span<const double> phases, std::span<const double> parities, double frequency,
                     double signal) {
    require(phases.size() == parities.size() && phases.size() >= 2, "fit_parity needs at least two points");
    const auto n = static_cast<Eigen::Index>(phases.size());
    RMatrix design(n, 2);
    RVector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double theta = frequency * signal + 3.0 * phases[static_cast<std::size_t>(i)];
        design(i, 0) = std::cos(theta);
        design(i, 1) = -std::sin(theta);
        y[i] = parities[static_cast<std::size_t>(i)];
    }
    RVector coef = design.colPivHouseholderQr().solve(y);
    ParityFit fit;
    fit.amplitude = std::hypot(coef[0], coef[1]);
    fit.offset = std::atan2(coef[1], coef[0]);
    fit.residual_rms = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(n));
    return fit;
}

}  // namespace dfsense
