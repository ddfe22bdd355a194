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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dfsense/calib.hpp"
#include "dfsense/channels.hpp"
#include "dfsense/dfs.hpp"
#include "dfsense/estimation.hpp"
#include "dfsense/metrology.hpp"
#include "dfsense/optimize.hpp"
#include "dfsense/protocols.hpp"
#include "dfsense/scenario.hpp"
#include "dfsense/tomography.hpp"
#include "oracles.hpp"

using namespace dfsense;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

// z with P(Z > z) = p for a standard normal Z.
double upper_normal_quantile(double p) {
    double lo = 0, hi = 40;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / M_SQRT2) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

const ScenarioConfig kPaper = preset("paper-experiment");

double omega() { return kPaper.frequency(); }

SensorLayout layout3() { return SensorLayout::equidistant(3, kPaper.spacing); }

std::vector<FieldComponent> const_grad() { return {FieldComponent::polynomial(0), FieldComponent::polynomial(1)}; }

DiagonalGenerator quadratic(const SensorLevels &lv) {
    return build_signal_generator(layout3(), FieldComponent::polynomial(2), kPaper.kappa, kPaper.time, lv);
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

void criterion1(Outcome &o) {
    const double w = omega();
    double a = rmse_bound(w * w), b = rmse_bound(w * w / 16), c = rmse_bound(3.3 * w * w / 16);
    o.detail << "omega=" << fmt(w, 6) << " bounds " << fmt(a, 3) << " / " << fmt(b, 3) << " / " << fmt(c, 3);
    o.check(within(a, 2.462, 0.01 * 2.462), "w^2 bound");
    o.check(within(b, 9.847, 0.01 * 9.847), "w^2/16 bound");
    o.check(within(c, 5.42, 0.01 * 5.42), "3.3w^2/16 bound");
}

void criterion2(Outcome &o) {
    auto d52 = SensorLevels::d52();
    auto census = enumerate_dfs(d52, layout3(), const_grad());
    auto g = quadratic(d52);
    std::size_t maximal = 0;
    for (auto &d : census.subspaces) maximal += std::abs(spectral_range(d, g).width - omega()) < 1e-9;
    o.detail << census.subspaces.size() << " DFSs, " << maximal << " with width omega";
    o.check(census.subspaces.size() == 68, "68 DFSs");
    o.check(maximal == 32, "32 maximal");

    auto bold = SensorLevels::bold();
    auto labels = [&](const DfsCensus &c) {
        std::vector<std::vector<std::vector<double>>> out;
        for (auto &d : c.subspaces) {
            std::vector<std::vector<double>> m;
            for (auto k : d.members) m.push_back(bold.basis(k));
            std::sort(m.begin(), m.end());
            out.push_back(m);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto constant = labels(enumerate_dfs(bold, layout3(), std::vector{FieldComponent::polynomial(0)}));
    std::vector<std::vector<std::vector<double>>> want_c{
        {{-1, -2, 1}, {1, -2, -1}}, {{-1, 2, -1}, {1, -2, 1}}, {{-1, 2, 1}, {1, 2, -1}}};
    std::sort(want_c.begin(), want_c.end());
    auto both = labels(enumerate_dfs(bold, layout3(), const_grad()));
    std::vector<std::vector<std::vector<double>>> want_b{{{-1, 2, -1}, {1, -2, 1}}};
    o.detail << "; bold: " << constant.size() << " (constant), " << both.size() << " (constant+gradient)";
    o.check(constant == want_c, "bold constant-noise list");
    o.check(both == want_b, "bold constant+gradient list");
}

void criterion3(Outcome &o) {
    auto lv = SensorLevels::bold();
    auto census = enumerate_dfs(lv, layout3(), const_grad());
    auto g = quadratic(lv);
    auto sep = overwhelming_dephasing(DensityMatrix::from_pure(balanced_product_state(lv)), census);
    std::vector<double> a{1, -2, 1}, b{-1, 2, -1};
    double amp = 2 * std::abs(sep(lv.index_of(a), lv.index_of(b)));
    auto swd = DensityMatrix::from_pure(swd_state(census, g));
    double drift = (overwhelming_dephasing(swd, census).matrix() - swd.matrix()).cwiseAbs().maxCoeff();
    // Amplitude read from the parity fringe itself.
    double fringe = 0;
    for (double phi = 0; phi < 2 * M_PI; phi += 0.01) fringe = std::max(fringe, parity_expectation(sep, phi));
    o.detail << "separable A=" << fmt(amp, 12) << " (fringe max " << fmt(fringe, 6) << "), SWD drift " << drift;
    o.check(std::abs(amp - 0.25) < 1e-12, "A = 0.25");
    o.check(drift <= 1e-12, "SWD fixed point");
}

void criterion4(Outcome &o) {
    double worst = 0;
    for (std::size_t m = 2; m <= 7; ++m) {
        auto row = exponential_advantage(m, kPaper.kappa, kPaper.time, kPaper.spacing);
        double want = std::pow(2.0, 1.0 - static_cast<double>(m)) * row.delta * row.delta;
        double e1 = std::abs(row.qfi_product_closed - want) / want;
        double e2 = std::abs(row.qfi_product_sld - want) / want;
        double e3 = std::abs(row.qfi_product_block - want) / want;
        worst = std::max({worst, e1, e2, e3});
        o.check(e1 <= 1e-9 && e2 <= 1e-9 && e3 <= 1e-9, "m=" + std::to_string(m));
    }
    o.detail << "m=2..7, worst relative deviation " << worst;
}

void criterion5(Outcome &o) {
    const double w = omega();
    double db = improvement_db(rmse_bound(parity_cfi(0.146, w, 1.5)), rmse_bound(parity_cfi(0.45, w, 1.5)));
    o.detail << fmt(db, 3) << " dB";
    o.check(within(db, 4.9, 0.1), "4.9 +- 0.1 dB");
}

void criterion6(Outcome &o) {
    ScenarioConfig c = kPaper;
    CampaignConfig cc = c.campaign(1);
    const double w = c.frequency();
    auto swd = run_campaign(c.model(c.amplitude_swd), cc);
    auto sep = run_campaign(c.model(c.amplitude_separable), cc);
    auto ideal = run_campaign(c.model(c.amplitude_ideal_separable), cc);
    double ratio = sep.average_rmse / swd.average_rmse;
    double ideal_cr = rmse_bound(parity_cfi(c.amplitude_ideal_separable, w, M_PI / 2));
    double ratio_ideal = ideal_cr / swd.average_rmse;
    double ratio_ideal_mc = ideal.average_rmse / swd.average_rmse;
    o.detail << "M=" << cc.repeats << " SWD " << fmt(swd.average_rmse, 3) << ", separable " << fmt(sep.average_rmse, 3)
             << ", ratio " << fmt(ratio, 3) << "; ideal separable line " << fmt(ideal_cr, 3) << " -> ratio "
             << fmt(ratio_ideal, 3) << " (Monte Carlo A=0.25 campaign: " << fmt(ideal.average_rmse, 3) << ", ratio "
             << fmt(ratio_ideal_mc, 3) << ")";
    o.check(cc.repeats >= 500, "M >= 500");
    o.check(within(ratio, 2.6, 0.3), "ratio 2.6 +- 0.3");
    o.check(within(ratio_ideal, 1.48, 0.12), "ratio 1.48 +- 0.12");
    std::size_t inside_se = 0, inside_sd = 0, total = 0;
    for (const auto *r : {&swd, &sep}) {
        for (auto &s : r->signals) {
            double sd = s.mean_se * std::sqrt(static_cast<double>(s.estimates.size()));
            inside_se += std::abs(s.mean - s.truth) <= s.mean_se;
            inside_sd += std::abs(s.mean - s.truth) <= sd;
            ++total;
        }
    }
    o.detail << "; histogram means within 1 SE: " << inside_se << "/" << total << ", within 1 SD: " << inside_sd << "/"
             << total;
    o.check(inside_se == total, "histogram means within one standard error");
}

void criterion7(Outcome &o) {
    const double unit = omega() * omega() / 16;
    auto bold = standard_problem(Restriction::BoldTwoLevel, kPaper.kappa, kPaper.time, kPaper.spacing);
    OptimizerConfig bc;
    bc.restarts = 10;
    bc.simplex.max_evaluations = 20000;
    bc.seed = kPaper.seed;
    auto rb = optimize_cfi(bold, bc);
    o.detail << "bold " << fmt(rb.best / unit, 5) << " w^2/16";
    o.check(within(rb.best / unit, 1.0, 0.005), "bold restriction = w^2/16 within 0.5%");
    o.check(std::abs(bold.objective(rb.params) - rb.best) <= 1e-12, "bold re-evaluation");

    auto full = standard_problem(Restriction::FullSixLevel, kPaper.kappa, kPaper.time, kPaper.spacing);
    OptimizerConfig fc;
    fc.restarts = kPaper.optimizer.restarts;
    fc.simplex.max_evaluations = kPaper.optimizer.max_evaluations;
    fc.box = kPaper.optimizer.box;
    fc.seed = kPaper.seed;
    auto rf = optimize_cfi(full, fc);
    o.detail << "; six-level (" << full.params().size() << " params, " << fc.restarts << " restarts) "
             << fmt(rf.best / unit, 4) << " w^2/16, restarts:";
    for (auto &r : rf.restarts) o.detail << " " << fmt(r.value / unit, 3);
    o.check(full.params().size() == 141, "141 parameters");
    o.check(rf.best / unit >= 3.2, ">= 3.2 w^2/16");
    o.check(rb.best <= rf.best + 1e-12 && rf.best <= omega() * omega(), "ordering bold <= six-level <= w^2");
    o.check(std::abs(full.objective(rf.params) - rf.best) <= 1e-12, "six-level re-evaluation");

    // Optimum region under white outcome noise: the restart preferred under
    // noise is a noise-free near-optimum, and a local re-optimization under
    // noise stays at the noise-free optimum.
    for (double eps : kPaper.optimizer.epsilons) {
        std::size_t arg = 0;
        double top = -1;
        for (auto &r : rf.restarts) {
            double v = full.objective(r.params, eps);
            if (v > top) {
                top = v;
                arg = r.index;
            }
        }
        double clean_of_arg = rf.restarts[arg].value;
        NelderMeadOptions nm;
        nm.initial_step = 0.05;
        nm.max_evaluations = 20000;
        auto f = [&](const std::vector<double> &x) { return full.objective(x, eps); };
        auto refined = nelder_mead_maximize(f, rf.params, nm);
        double refined_clean = full.objective(refined.x, 0.0);
        double at_opt = full.objective(rf.params, eps);
        o.detail << "; eps " << eps << ": F " << fmt(at_opt / unit, 3) << ", best restart #" << arg << " ("
                 << fmt(clean_of_arg / unit, 3) << " noise-free), re-optimized noise-free "
                 << fmt(refined_clean / unit, 4);
        o.check(at_opt < rf.best, "noise lowers F at eps=" + std::to_string(eps));
        o.check(clean_of_arg >= 0.99 * rf.best, "noisy ranking picks a near-optimum at eps=" + std::to_string(eps));
        o.check(refined_clean >= 0.99 * rf.best, "re-optimization stays in the optimum region at eps=" +
                                                     std::to_string(eps));
    }
}

void criterion8(Outcome &o) {
    std::vector<double> p;
    for (double pa : {0.040, 0.02, 0.040}) p.push_back(combined_error_probability(0.011, pa));
    CVector gv = CVector::Zero(8);
    gv[0] = gv[7] = M_SQRT1_2;
    PureState ghz(gv);
    double drop_ghz = 1 - fidelity(depolarize_independent(DensityMatrix::from_pure(ghz), p), ghz);
    CVector plus = CVector::Constant(2, M_SQRT1_2);
    std::vector<CVector> f{plus, plus, plus};
    PureState sep = product_state(f);
    double drop_sep = 1 - fidelity(depolarize_independent(DensityMatrix::from_pure(sep), p), sep);
    double pdec = decay_probability(0.08, 1.045);

    CVector qv = CVector::Zero(27);
    qv[0] = qv[13] = M_SQRT1_2;
    auto rho = DensityMatrix::from_pure(PureState(qv));
    auto ideal = qutrit_pi_pulse(rho, 0, 2);
    double drop_lib = 1 - (ideal.matrix() * qutrit_pi_pulse(amplitude_damping_qutrit(rho, 0.08, 1.045), 0, 2).matrix())
                              .trace()
                              .real();
    CMatrix u = CMatrix::Identity(3, 3);
    u(0, 0) = u(2, 2) = 0;
    u(0, 2) = u(2, 0) = Complex(0, -1);
    CMatrix big = oracle::kron3(u, u, u);
    CMatrix damped = big * oracle::brute_force_damping(rho.matrix(), pdec) * big.adjoint();
    CMatrix ideal_o = big * rho.matrix() * big.adjoint();
    double drop_oracle = 1 - (ideal_o * damped).trace().real();

    o.detail << "depolarizing drops GHZ " << fmt(drop_ghz, 4) << ", separable " << fmt(drop_sep, 4) << "; p(80 ms) "
             << fmt(pdec, 6) << "; decay GHZ drop " << fmt(drop_lib, 6) << " (oracle diff "
             << std::abs(drop_lib - drop_oracle) << ")";
    o.check(within(drop_ghz, 0.09, 0.02), "GHZ drop 0.09 +- 0.02");
    o.check(within(drop_sep, 0.06, 0.01), "separable drop 0.06 +- 0.01");
    o.check(within(pdec, 0.07371, 1e-4), "p = 0.07371");
    o.check(std::abs(drop_lib - drop_oracle) <= 1e-12, "Kraus oracle agreement");
}

void criterion9(Outcome &o) {
    const double w = omega();
    // Round trip inside every fringe.
    double worst_rt = 0;
    for (double phi0 : {0.0, 0.9, -2.4})
        for (double phi_r : {0.0, 0.7, 3.1, 4.6})
            for (double a : {0.146, 0.45, 1.0}) {
                ParityModel m{a, w, phi_r, phi0};
                for (double b = -25; b <= 45; b += 0.0917) {
                    double ph = m.phase(b);
                    double frac = ph / M_PI - std::floor(ph / M_PI);
                    if (frac < 1e-6 || frac > 1 - 1e-6) continue;
                    worst_rt = std::max(worst_rt, std::abs(mle(m.parity(b), m, fringe_index(m, b)) - b));
                }
            }
    o.detail << "round trip max error " << worst_rt;
    o.check(worst_rt <= 1e-9, "round trip 1e-9");

    // Large-N consistency, exact and sampled, at phases inside the window.
    double worst_rel = 0, worst_bias = 0;
    const std::uint64_t big = 10000;
    for (double a : {0.146, 0.45, 1.0})
        for (double phase : {M_PI / 2 - 0.7, M_PI / 2 - 0.3, M_PI / 2, M_PI / 2 + 0.5, M_PI / 2 + 0.7}) {
            ParityModel m{a, w, 0.0, phase};
            auto mom = exact_moments(m, 0.0, big);
            double target = 1 / std::sqrt(m.cfi(0.0));
            worst_rel = std::max(worst_rel, std::abs(std::sqrt(big * mom.mse) / target - 1));
            worst_bias = std::max(worst_bias, std::abs(mom.bias) * std::sqrt(double(big)) / target);
        }
    ParityModel mc{0.45, w, 0.0, 1.2};
    std::mt19937_64 rng(stream_seed(kPaper.seed, 9, 0));
    std::vector<double> est;
    for (int k = 0; k < 4000; ++k) est.push_back(mle(sample_shots(mc, 0.0, big, rng), mc, fringe_index(mc, 0.0)));
    double mc_ratio = normalized_rmse(est, 0.0, big) * std::sqrt(mc.cfi(0.0));
    o.detail << "; N=1e4: worst |sqrt(N) RMSE sqrt(CFI) - 1| " << fmt(worst_rel, 4) << " (exact), Monte Carlo "
             << fmt(mc_ratio, 4) << ", worst bias " << fmt(worst_bias, 4) << " in units of the CR width";
    o.check(worst_rel <= 0.05 && std::abs(mc_ratio - 1) <= 0.05, "sqrt(N) RMSE -> 1/sqrt(CFI) within 5%");
    o.check(worst_bias <= 0.05, "bias -> 0");

    // Simulated RMSE against the bias-aware Cramer-Rao bound. The exact RMSE from
    // binomial enumeration must respect the bound outright; the Monte Carlo RMSE
    // is tested with a 1% family-wise (Bonferroni) threshold over all cases.
    CampaignConfig cc = kPaper.campaign(1);
    cc.repeats = 500;
    const std::vector<double> amps{0.146, 0.25, 0.45, 1.0};
    const std::vector<std::uint64_t> shots{8, 20, 72, 200};
    const std::size_t total = amps.size() * shots.size() * kPaper.signals.size();
    const double z_crit = upper_normal_quantile(0.01 / double(total));
    std::size_t over_crit = 0, over_3 = 0, cases = 0, exact_below = 0;
    double worst_z = -1e9, worst_exact = 1e9;
    std::string worst_case;
    for (double a : amps)
        for (std::uint64_t n : shots) {
            cc.shots = n;
            cc.seed = stream_seed(kPaper.seed, n, static_cast<std::uint64_t>(a * 1000));
            auto model = kPaper.model(a);
            auto r = run_campaign(model, cc);
            for (auto &s : r.signals) {
                double bound = 0, exact = 0;
                for (double phi : s.phases) {
                    auto mm = model.with_phase(phi);
                    auto mom = exact_moments(mm, s.truth, n);
                    bound += mom.mean_slope * mom.mean_slope / mm.cfi(s.truth) + double(n) * mom.bias * mom.bias;
                    exact += double(n) * mom.mse;
                }
                bound = std::sqrt(bound / s.phases.size());
                exact = std::sqrt(exact / s.phases.size());
                worst_exact = std::min(worst_exact, exact / bound);
                exact_below += exact < bound * (1 - 1e-9);
                double z = (bound - s.rmse) / s.rmse_se;
                if (z > worst_z) {
                    worst_z = z;
                    worst_case = "A=" + fmt(a, 3) + " N=" + std::to_string(n) + " B=" + fmt(s.truth, 1);
                }
                over_3 += z > 3;
                over_crit += z > z_crit;
                ++cases;
            }
        }
    o.detail << "; exact RMSE / bias-aware CR bound >= " << fmt(worst_exact, 4) << " over " << cases
             << " cases; Monte Carlo: worst z " << fmt(worst_z, 2) << " at " << worst_case << ", " << over_3
             << " above 3 SE, " << over_crit << " above the family-wise threshold " << fmt(z_crit, 2);
    o.check(exact_below == 0, "exact RMSE never beats the bound");
    o.check(over_crit == 0, "simulated RMSE never beats the bound beyond Monte Carlo error");
}

void criterion10(Outcome &o) {
    ScenarioConfig c = kPaper;
    CampaignConfig cc = c.campaign(1);
    cc.repeats = c.scaling.repeats;
    const double w = c.frequency();
    std::vector<ParityModel> models{c.model(c.amplitude_swd), c.model(c.amplitude_separable)};
    auto rows = shots_scaling(models, c.scaling.shots, cc);
    double cr_line = window_cr_rmse(models[0], c.signals, cc.phase_grid, cc.window);
    // Rows hold sqrt(N)-normalized RMSE, so the guess level scales with sqrt(N).
    double guess = random_guess_rmse(w);
    double limit = improvement_db(rmse_bound(parity_cfi(c.amplitude_separable, w, 1.5)),
                                  rmse_bound(parity_cfi(c.amplitude_swd, w, 1.5)));
    double worst_swd = 0, worst_sep = 0;
    bool monotone = true, below = true;
    o.detail << "M=" << cc.repeats << ", CR line " << fmt(cr_line, 3) << ", random guess " << fmt(guess, 3)
             << ", limit " << fmt(limit, 2) << " dB; N:swd/line,sep/guess,dB =";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        double rs = r.rmse[0] / cr_line, rg = r.rmse[1] / (guess * std::sqrt(double(r.shots)));
        o.detail << " " << r.shots << ":" << fmt(rs, 3) << "," << fmt(rg, 3) << "," << fmt(r.improvement_db, 2);
        if (r.shots >= 16) worst_swd = std::max(worst_swd, std::abs(rs - 1));
        if (r.shots <= 20) worst_sep = std::max(worst_sep, std::abs(rg - 1));
        if (i > 0) {
            double se = std::hypot(r.improvement_db_se, rows[i - 1].improvement_db_se);
            monotone = monotone && r.improvement_db >= rows[i - 1].improvement_db - 2 * se;
        }
        below = below && r.improvement_db <= limit + 2 * r.improvement_db_se;
    }
    o.detail << "; worst SWD deviation (N>=16) " << fmt(worst_swd, 3) << ", worst separable deviation (N<=20) "
             << fmt(worst_sep, 3);
    o.check(worst_swd <= 0.10, "SWD within 10% of the CFI line for N >= 16");
    o.check(worst_sep <= 0.15, "separable within 15% of random guess for N <= 20");
    o.check(monotone, "improvement monotone in N");
    o.check(below, "improvement approaches the limit from below");
}

void criterion11(Outcome &o) {
    CVector gv = CVector::Zero(8);
    gv[0] = gv[7] = M_SQRT1_2;
    PureState ghz(gv);
    auto rho = DensityMatrix::from_pure(ghz);
    std::size_t good = 0;
    double worst = 1;
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto r = reconstruct_mle(simulate_tomography(rho, 480, stream_seed(kPaper.seed, s, 11)));
        double f = fidelity(r.rho, ghz);
        worst = std::min(worst, f);
        good += f >= 0.98;
    }
    auto counts = simulate_tomography(rho, 480, kPaper.seed);
    auto fid = [](const DensityMatrix &r) { return ghz_fidelity(r, 0, 7); };
    auto a = bootstrap_errorbars(counts, fid, 300, 5);
    auto b = bootstrap_errorbars(counts, fid, 300, 5);
    o.detail << good << "/100 seeds with fidelity >= 0.98 (worst " << fmt(worst, 4) << "); bootstrap-300 std "
             << fmt(a.std, 4) << (a.samples == b.samples ? " reproduced exactly" : " NOT reproduced");
    o.check(good >= 95, ">= 95% of seeds");
    o.check(a.samples == b.samples && a.std == b.std && a.samples.size() == 300, "bootstrap determinism");
}

void criterion12(Outcome &o) {
    const auto &cal = kPaper.calibration;
    // Calibrated list that accompanies the Rabi-frequency fit.
    const std::vector<double> want{2.1, 5.0, 7.6, 9.5, 11.9, 15.2};
    double worst = 0;
    o.detail << "B^q:";
    for (std::size_t i = 0; i < cal.rabi_khz.size(); ++i) {
        auto s = ac_stark_quadratic(2 * M_PI * cal.rabi_khz[i] * 1e3, 2 * M_PI * cal.detuning_khz * 1e3, cal.coupling,
                                    kPaper.spacing, cal.g_factor);
        double b = std::abs(s.quadratic_field);
        worst = std::max(worst, std::abs(b / want[i] - 1));
        o.detail << " " << fmt(b, 2);
        if (i == 1) o.detail << " (vs 4.7 in the signal list: " << fmt(100 * (b / 4.7 - 1), 1) << "%)";
    }
    o.detail << "; worst deviation " << fmt(100 * worst, 2) << "%";
    o.check(worst <= 0.03, "within 3% elementwise");
}

}  // namespace

int main(int argc, char **argv) {
    struct Entry {
        int id;
        const char *name;
        std::function<void(Outcome &)> fn;
    };
    const std::vector<Entry> entries{
        {1, "Heisenberg line", criterion1},
        {2, "DFS census", criterion2},
        {3, "Amplitudes", criterion3},
        {4, "Product-state penalty", criterion4},
        {5, "Infinite-shot improvement", criterion5},
        {6, "Experiment-scale Monte Carlo", criterion6},
        {7, "Optimizer", criterion7},
        {8, "Error models", criterion8},
        {9, "Estimator statistics", criterion9},
        {10, "Shot-scaling reproduction", criterion10},
        {11, "Tomography round-trip", criterion11},
        {12, "Calibration", criterion12},
    };
    // Optional positional arguments select a subset of criteria by number.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failed = 0, ran = 0;
    for (const auto &e : entries) {
        if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
        ++ran;
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            e.fn(o);
        } catch (const std::exception &ex) {
            o.pass = false;
            o.detail << " [exception: " << ex.what() << "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << e.id << " (" << e.name << ", " << fmt(secs, 1)
                  << " s): " << o.detail.str() << std::endl;
    }
    std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
