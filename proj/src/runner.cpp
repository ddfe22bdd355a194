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

#include "dfsense/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dfsense/calib.hpp"
#include "dfsense/channels.hpp"
#include "dfsense/dfs.hpp"
#include "dfsense/metrology.hpp"
#include "dfsense/optimize.hpp"
#include "dfsense/protocols.hpp"
#include "dfsense/serialize.hpp"
#include "dfsense/tomography.hpp"

namespace dfsense {

namespace fs = std::filesystem;

namespace {

struct Context {
    const ScenarioConfig &config;
    const RunOptions &options;
    std::ostream &log;

    std::string path(const std::string &file) const { return (fs::path(options.output_dir) / file).string(); }

    Json summary(const std::string &subcommand) const {
        Json j;
        j["subcommand"] = subcommand;
        j["config_hash"] = config_hash(config);
        j["config"] = Json::parse(config_to_json(config));
        if (options.timestamp) {
            std::time_t now = std::time(nullptr);
            std::tm tm{};
            gmtime_r(&now, &tm);
            std::ostringstream s;
            s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
            j["generated_at"] = s.str();
        }
        return j;
    }
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

std::string labels_text(const SensorLevels &levels, const std::vector<std::size_t> &members) {
    std::string out;
    for (std::size_t k : members) {
        if (!out.empty()) {
            out += ' ';
        }
        out += levels.format(k);
    }
    return out;
}

void run_dfs(const Context &ctx) {
    const auto &c = ctx.config;
    SensorLevels levels = c.sensor_levels();
    SensorLayout layout = c.layout();
    DfsCensus census = enumerate_dfs(levels, layout, c.noise());
    DiagonalGenerator g = build_signal_generator(layout, c.signal(), c.kappa, c.time, levels);
    double widest = 0.0;
    for (const auto &d : census.subspaces) {
        widest = std::max(widest, spectral_range(d, g).width);
    }
    CsvWriter csv({"dfs", "size", "width", "width_over_max", "maximal", "energy", "members"});
    std::size_t maximal = 0;
    Json list = Json::array();
    for (std::size_t i = 0; i < census.subspaces.size(); ++i) {
        const auto &d = census.subspaces[i];
        SpectralRange r = spectral_range(d, g);
        bool is_max = widest > 0.0 && std::abs(r.width - widest) <= 1e-9 * widest;
        maximal += is_max ? 1 : 0;
        std::string energy;
        for (Eigen::Index k = 0; k < d.energy.size(); ++k) {
            energy += (k ? " " : "") + CsvWriter::num(d.energy[k]);
        }
        csv.row({std::to_string(i), std::to_string(d.size()), CsvWriter::num(r.width),
                 CsvWriter::num(widest > 0 ? r.width / widest : 0.0), is_max ? "1" : "0", energy,
                 labels_text(levels, d.members)});
        list.push_back({{"members", d.members}, {"width", r.width}, {"maximal", is_max}});
    }
    csv.save(ctx.path("dfs.csv"));
    Json j = ctx.summary("dfs");
    j["dfs_count"] = census.subspaces.size();
    j["maximal_count"] = maximal;
    j["max_width"] = widest;
    j["remainder_count"] = census.remainder.size();
    j["subspaces"] = list;
    write_json_file(ctx.path("dfs.json"), j);
    ctx.log << census.subspaces.size() << " DFSs, " << maximal << " maximal (width " << fmt(widest, 6) << " rad per pT/um^2)\n";
}

void run_bounds(const Context &ctx) {
    const auto &c = ctx.config;
    const double w = c.frequency();
    const double heis = rmse_bound(w * w);
    const double sep = rmse_bound(w * w / 16.0);
    const double six = rmse_bound(3.3 * w * w / 16.0);
    const double phase = 1.5;
    const double inf_db = improvement_db(rmse_bound(parity_cfi(c.amplitude_separable, w, phase)),
                                         rmse_bound(parity_cfi(c.amplitude_swd, w, phase)));
    Json j = ctx.summary("bounds");
    j["omega"] = w;
    j["rmse_heisenberg"] = heis;
    j["rmse_separable_two_level"] = sep;
    j["rmse_six_level_optimized"] = six;
    j["db_heisenberg_vs_separable"] = improvement_db(sep, heis);
    j["db_six_level_vs_separable"] = improvement_db(sep, six);
    j["db_infinite_shot_measured_amplitudes"] = inf_db;
    ctx.log << "omega = " << fmt(w, 6) << " rad per pT/um^2\n";
    ctx.log << "RMSE >= " << fmt(heis, 3) << " pT/um^2 (F = w^2, entangled DFS state)\n";
    ctx.log << "RMSE >= " << fmt(sep, 3) << " pT/um^2 (F = w^2/16, separable two-level)\n";
    ctx.log << "RMSE >= " << fmt(six, 3) << " pT/um^2 (F = 3.3 w^2/16, separable six-level)\n";
    ctx.log << "improvement " << fmt(improvement_db(sep, heis), 2) << " dB (entangled vs separable bound), "
            << fmt(inf_db, 2) << " dB (infinite shots, A = " << c.amplitude_swd << " vs " << c.amplitude_separable
            << ", phase 1.5 rad)\n";
    {
        // The configured scenario itself: widest DFS and, with finite noise
        // models, the QFI that survives the finite-strength channel.
        SensorLevels levels = c.sensor_levels();
        SensorLayout layout = c.layout();
        const auto noise = c.noise();
        DfsCensus census = enumerate_dfs(levels, layout, noise);
        if (census.subspaces.empty()) {
            throw Error("no decoherence-free subspace exists for this noise and layout");
        }
        DiagonalGenerator g = build_signal_generator(layout, c.signal(), c.kappa, c.time, levels);
        const DfsRecord &best = best_dfs(census.subspaces, g);
        const double width = spectral_range(best, g).width;
        j["dfs_width"] = width;
        j["rmse_dfs_state"] = rmse_bound(width * width);
        ctx.log << "widest DFS: width " << fmt(width, 6) << ", RMSE >= " << fmt(rmse_bound(width * width), 3)
                << " pT/um^2\n";
        if (!c.noise_models.empty()) {
            DensityMatrix rho = finite_dephasing(DensityMatrix::from_pure(optimal_state(best, g)), levels, layout,
                                                 noise, c.noise_models, c.kappa);
            double f = sld_and_qfi(rho, signal_derivative(rho, g)).qfi;
            DensityMatrix prod = finite_dephasing(DensityMatrix::from_pure(balanced_product_state(levels)), levels,
                                                  layout, noise, c.noise_models, c.kappa);
            double fp = sld_and_qfi(prod, signal_derivative(prod, g)).qfi;
            j["finite_noise_qfi_dfs_state"] = f;
            j["finite_noise_qfi_product_state"] = fp;
            ctx.log << "finite noise: QFI " << fmt(f / (w * w), 6) << " w^2 (DFS state), " << fmt(fp / (w * w), 6)
                    << " w^2 (balanced product state)\n";
        }
    }
    if (c.protocol == Protocol::CustomState) {
        SensorLevels levels = c.sensor_levels();
        CVector v(static_cast<Eigen::Index>(levels.dimension()));
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            v[k] = Complex(c.custom_state[2 * k], c.custom_state[2 * k + 1]);
        }
        PureState psi(v.normalized());
        DfsCensus census = enumerate_dfs(levels, c.layout(), c.noise());
        DiagonalGenerator g = build_signal_generator(c.layout(), c.signal(), c.kappa, c.time, levels);
        DensityMatrix rho = overwhelming_dephasing(DensityMatrix::from_pure(psi), census);
        double f = sld_and_qfi(rho, signal_derivative(rho, g)).qfi;
        j["custom_state_qfi"] = f;
        ctx.log << "custom state: QFI after noise = " << fmt(f / (w * w), 6) << " w^2"
                << (f > 0 ? ", RMSE >= " + fmt(rmse_bound(f), 3) + " pT/um^2" : "") << "\n";
    }
    write_json_file(ctx.path("bounds.json"), j);
}

void run_simulate(const Context &ctx) {
    const auto &c = ctx.config;
    const CampaignConfig campaign = c.campaign(ctx.options.threads);
    struct Entry {
        std::string name;
        double amplitude;
    };
    const std::vector<Entry> entries{{"swd", c.amplitude_swd},
                                     {"separable", c.amplitude_separable},
                                     {"ideal-separable", c.amplitude_ideal_separable}};
    CsvWriter hist({"model", "signal", "bin", "bin_low", "bin_high", "count"});
    CsvWriter table({"model", "signal", "rmse", "rmse_se", "mean", "mean_se", "selected_phases"});
    std::vector<CampaignResult> results;
    for (const auto &e : entries) {
        CampaignResult r = run_campaign(c.model(e.amplitude), campaign);
        for (const auto &s : r.signals) {
            const double width = (s.histogram.high - s.histogram.low) / static_cast<double>(s.histogram.counts.size());
            for (std::size_t b = 0; b < s.histogram.counts.size(); ++b) {
                hist.row({e.name, CsvWriter::num(s.truth), std::to_string(b),
                          CsvWriter::num(s.histogram.low + width * static_cast<double>(b)),
                          CsvWriter::num(s.histogram.low + width * static_cast<double>(b + 1)),
                          std::to_string(s.histogram.counts[b])});
            }
            table.row({e.name, CsvWriter::num(s.truth), CsvWriter::num(s.rmse), CsvWriter::num(s.rmse_se),
                       CsvWriter::num(s.mean), CsvWriter::num(s.mean_se), std::to_string(s.phases.size())});
        }
        table.row({e.name, "average", CsvWriter::num(r.average_rmse), CsvWriter::num(r.average_rmse_se), "", "", ""});
        results.push_back(std::move(r));
    }
    const double w = c.frequency();
    const double ideal_cr = rmse_bound(c.amplitude_ideal_separable * c.amplitude_ideal_separable * w * w);

    ParityModel models[2] = {c.model(c.amplitude_swd), c.model(c.amplitude_separable)};
    CampaignConfig scaling_cfg = campaign;
    scaling_cfg.repeats = c.scaling.repeats;
    auto rows = shots_scaling(models, c.scaling.shots, scaling_cfg);
    CsvWriter scaling({"shots", "rmse_swd", "rmse_swd_se", "rmse_separable", "rmse_separable_se", "improvement_db",
                       "improvement_db_se", "cr_swd", "random_guess"});
    const double cr_line = window_cr_rmse(models[0], c.signals, campaign.phase_grid, c.window);
    for (const auto &r : rows) {
        scaling.row({std::to_string(r.shots), CsvWriter::num(r.rmse[0]), CsvWriter::num(r.rmse_se[0]),
                     CsvWriter::num(r.rmse[1]), CsvWriter::num(r.rmse_se[1]), CsvWriter::num(r.improvement_db),
                     CsvWriter::num(r.improvement_db_se), CsvWriter::num(cr_line),
                     CsvWriter::num(random_guess_rmse(w) * std::sqrt(static_cast<double>(r.shots)))});
    }

    hist.save(ctx.path("histograms.csv"));
    table.save(ctx.path("rmse.csv"));
    scaling.save(ctx.path("scaling.csv"));
    const double ratio_sep = results[1].average_rmse / results[0].average_rmse;
    const double ratio_ideal_mc = results[2].average_rmse / results[0].average_rmse;
    const double ratio_ideal_cr = ideal_cr / results[0].average_rmse;
    Json j = ctx.summary("simulate");
    j["omega"] = w;
    j["campaigns"] = Json::object();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        j["campaigns"][entries[i].name] = {{"amplitude", entries[i].amplitude},
                                           {"average_rmse", results[i].average_rmse},
                                           {"average_rmse_se", results[i].average_rmse_se}};
    }
    j["ratio_separable_over_swd"] = ratio_sep;
    j["db_separable_over_swd"] = improvement_db(results[1].average_rmse, results[0].average_rmse);
    j["ideal_separable_cr_rmse"] = ideal_cr;
    j["ratio_ideal_separable_cr_over_swd"] = ratio_ideal_cr;
    j["ratio_ideal_separable_mc_over_swd"] = ratio_ideal_mc;
    j["scaling"] = rows;
    write_json_file(ctx.path("simulate.json"), j);
    ctx.log << "average RMSE: swd " << fmt(results[0].average_rmse, 3) << ", separable "
            << fmt(results[1].average_rmse, 3) << ", ideal separable " << fmt(results[2].average_rmse, 3)
            << " pT/um^2 (N = " << c.shots << ", M = " << c.repeats << ")\n";
    ctx.log << "separable/swd ratio " << fmt(ratio_sep, 3) << " (" << fmt(improvement_db(results[1].average_rmse, results[0].average_rmse), 2)
            << " dB); ideal-separable/swd " << fmt(ratio_ideal_cr, 3) << " (Cramer-Rao reference), "
            << fmt(ratio_ideal_mc, 3) << " (finite-N Monte Carlo)\n";
    ctx.log << "shot scaling: " << rows.size() << " rows written to scaling.csv\n";
}

void run_optimize(const Context &ctx) {
    const auto &c = ctx.config;
    Restriction restriction = parse_restriction(c.optimizer.restriction);
    CfiProblem problem = standard_problem(restriction, c.kappa, c.time, c.spacing);
    const double w = c.frequency();
    OptimizerConfig oc;
    oc.restarts = c.optimizer.restarts;
    oc.box = c.optimizer.box;
    oc.simplex.max_evaluations = c.optimizer.max_evaluations;
    oc.seed = c.seed;
    oc.threads = ctx.options.threads;
    OptimizeResult best = optimize_cfi(problem, oc);
    const double unit = w * w / 16.0;

    Json robustness = Json::array();
    for (double eps : c.optimizer.epsilons) {
        // Ranking of the restart optima under white outcome noise.
        std::size_t argmax = 0;
        double top = -1.0;
        for (const auto &r : best.restarts) {
            double v = problem.objective(r.params, eps);
            if (v > top) {
                top = v;
                argmax = r.index;
            }
        }
        NelderMeadOptions nm = oc.simplex;
        nm.initial_step = 0.05;
        nm.max_evaluations = std::min<std::size_t>(oc.simplex.max_evaluations, 20000);
        auto f = [&](const std::vector<double> &x) { return problem.objective(x, eps); };
        NelderMeadResult refined = nelder_mead_maximize(f, best.params, nm);
        double at_opt = robustness_check(problem, best.params, eps);
        double refined_clean = problem.objective(refined.x, 0.0);
        robustness.push_back({{"epsilon", eps},
                              {"f_at_noise_free_optimum", at_opt / unit},
                              {"f_reoptimized", refined.value / unit},
                              {"f_reoptimized_noise_free", refined_clean / unit},
                              {"best_restart_under_noise", argmax},
                              {"rank_agrees", argmax == best.best_restart}});
        ctx.log << "epsilon " << eps << ": F = " << fmt(at_opt / unit, 4) << " w^2/16 at the noise-free optimum, "
                << fmt(refined.value / unit, 4) << " after re-optimization (noise-free value "
                << fmt(refined_clean / unit, 4) << "), best restart " << (argmax == best.best_restart ? "unchanged" : "changed")
                << "\n";
    }
    Json j = ctx.summary("optimize");
    j["restriction"] = restriction_name(restriction);
    j["parameter_count"] = problem.params().size();
    j["omega"] = w;
    j["f_best"] = best.best;
    j["f_over_omega2_16"] = best.best / unit;
    j["result"] = best;
    j["robustness"] = robustness;
    write_json_file(ctx.path("optimize.json"), j);
    ctx.log << restriction_name(restriction) << " (" << problem.params().size() << " parameters): F_best = "
            << fmt(best.best / unit, 4) << " w^2/16 after " << best.restarts.size() << " restarts\n";
}

void run_tomography(const Context &ctx) {
    const auto &c = ctx.config;
    const auto &t = c.tomography;
    SensorLevels levels = SensorLevels::bold();
    SensorLayout layout = SensorLayout::equidistant(3, c.spacing);
    std::vector<FieldComponent> noise{FieldComponent::polynomial(0), FieldComponent::polynomial(1)};
    DfsCensus census = enumerate_dfs(levels, layout, noise);
    DiagonalGenerator g = build_signal_generator(layout, FieldComponent::polynomial(2), c.kappa, c.time, levels);
    const auto &dfs = best_dfs(census.subspaces, g);
    SpectralRange range = spectral_range(dfs, g);
    DensityMatrix rho;
    if (t.state == "ghz") {
        rho = DensityMatrix::from_pure(swd_state(census, g));
    } else if (t.state == "separable") {
        rho = overwhelming_dephasing(DensityMatrix::from_pure(balanced_product_state(levels)), census);
    } else {
        std::vector<double> p;
        for (double pa : t.p_addressed) {
            p.push_back(combined_error_probability(t.p_pi, pa));
        }
        rho = depolarize_independent(DensityMatrix::from_pure(swd_state(census, g)), p);
    }
    auto counts = simulate_tomography(rho, t.shots, c.seed);
    Reconstruction rec = reconstruct_mle(counts);
    const std::size_t a = range.argmax, b = range.argmin;
    auto fid = [&](const DensityMatrix &m) { return ghz_fidelity(m, a, b); };
    auto amp = [&](const DensityMatrix &m) { return coherence_amplitude(m, a, b); };
    BootstrapResult bf = bootstrap_errorbars(counts, fid, t.bootstrap, stream_seed(c.seed, 1, 0), ctx.options.threads);
    BootstrapResult ba = bootstrap_errorbars(counts, amp, t.bootstrap, stream_seed(c.seed, 2, 0), ctx.options.threads);

    CsvWriter csv({"basis", "outcome", "count"});
    for (const auto &bc : counts) {
        for (std::size_t k = 0; k < bc.counts.size(); ++k) {
            csv.row({bc.basis, std::to_string(k), std::to_string(bc.counts[k])});
        }
    }
    csv.save(ctx.path("tomography_counts.csv"));
    Json j = ctx.summary("tomography");
    j["state"] = t.state;
    j["pair"] = {a, b};
    j["true_fidelity"] = fid(rho);
    j["true_amplitude"] = amp(rho);
    j["fidelity"] = {{"value", bf.value}, {"std", bf.std}};
    j["amplitude"] = {{"value", ba.value}, {"std", ba.std}};
    j["iterations"] = rec.iterations;
    j["capped"] = rec.capped;
    j["log_likelihood"] = rec.log_likelihood;
    j["rho"] = matrix_to_json(rec.rho.matrix());
    write_json_file(ctx.path("tomography.json"), j);
    ctx.log << "tomography (" << t.state << ", " << t.shots << " shots x " << counts.size()
            << " bases): GHZ fidelity " << fmt(bf.value, 3) << " +- " << fmt(bf.std, 3) << " (model "
            << fmt(fid(rho), 3) << "), A = " << fmt(ba.value, 3) << " +- " << fmt(ba.std, 3) << " (model "
            << fmt(amp(rho), 3) << ")" << (rec.capped ? " [iteration cap reached]" : "") << "\n";
}

void run_calibrate(const Context &ctx) {
    const auto &k = ctx.config.calibration;
    const double two_pi_khz = 2.0 * M_PI * 1e3;
    CsvWriter csv({"rabi_khz", "stark_shift_hz", "quadratic_field", "edge_field_half", "edge_field_full"});
    Json rows = Json::array();
    for (double rabi : k.rabi_khz) {
        StarkCalibration s = ac_stark_quadratic(two_pi_khz * rabi, two_pi_khz * k.detuning_khz, k.coupling,
                                                ctx.config.spacing, k.g_factor);
        csv.row({CsvWriter::num(rabi), CsvWriter::num(s.stark_shift / (2.0 * M_PI)), CsvWriter::num(s.quadratic_field),
                 CsvWriter::num(s.edge_field_half), CsvWriter::num(s.edge_field_full)});
        rows.push_back({{"rabi_khz", rabi},
                        {"stark_shift_hz", s.stark_shift / (2.0 * M_PI)},
                        {"quadratic_field", s.quadratic_field},
                        {"edge_field_half", s.edge_field_half},
                        {"edge_field_full", s.edge_field_full}});
        ctx.log << "Omega = 2pi x " << rabi << " kHz: B^q = " << fmt(std::abs(s.quadratic_field), 2)
                << " pT/um^2, Stark shift " << fmt(s.stark_shift / (2.0 * M_PI), 2) << " Hz\n";
    }
    csv.save(ctx.path("calibration.csv"));
    Json echoes = Json::array();
    for (double f : k.reductions) {
        EchoSchedule e = echo_schedule(f, ctx.config.time, k.echo_segments);
        echoes.push_back({{"reduction", f}, {"times", e.times}, {"effective_ratio", e.effective_ratio()}});
        ctx.log << "echo F_red = " << f << ": " << e.times.size() << " echoes, effective ratio "
                << fmt(e.effective_ratio(), 6) << "\n";
    }
    Json j = ctx.summary("calibrate");
    j["stark"] = rows;
    j["echo_schedules"] = echoes;
    write_json_file(ctx.path("calibration.json"), j);
}

void run_sweep(const Context &ctx) {
    const auto &c = ctx.config;
    CsvWriter csv({"sensors", "kernel", "delta", "qfi_entangled", "qfi_product_closed", "qfi_product_sld",
                   "rmse_ratio"});
    Json rows = Json::array();
    for (std::size_t m = c.sweep_min; m <= c.sweep_max; ++m) {
        AdvantageRow r = exponential_advantage(m, c.kappa, c.time, c.spacing);
        std::string kernel;
        for (Eigen::Index i = 0; i < r.kernel.size(); ++i) {
            kernel += (i ? " " : "") + CsvWriter::num(r.kernel[i]);
        }
        csv.row({std::to_string(m), kernel, CsvWriter::num(r.delta), CsvWriter::num(r.qfi_entangled),
                 CsvWriter::num(r.qfi_product_closed), CsvWriter::num(r.qfi_product_sld), CsvWriter::num(r.rmse_ratio)});
        rows.push_back({{"sensors", m},
                        {"kernel", std::vector<double>(r.kernel.data(), r.kernel.data() + r.kernel.size())},
                        {"delta", r.delta},
                        {"qfi_entangled", r.qfi_entangled},
                        {"qfi_product_closed", r.qfi_product_closed},
                        {"qfi_product_sld", r.qfi_product_sld},
                        {"rmse_ratio", r.rmse_ratio}});
        ctx.log << "m = " << m << ": Delta = " << fmt(r.delta, 6) << ", product-state QFI / Delta^2 = "
                << fmt(r.qfi_product_sld / (r.delta * r.delta), 6) << ", RMSE ratio " << fmt(r.rmse_ratio, 3) << "\n";
    }
    csv.save(ctx.path("sweep.csv"));
    Json j = ctx.summary("sweep");
    j["rows"] = rows;
    write_json_file(ctx.path("sweep.json"), j);
}

}  // namespace

std::vector<std::string> subcommands() {
    return {"dfs", "bounds", "simulate", "optimize", "tomography", "calibrate", "sweep"};
}

void run(const std::string &subcommand, const ScenarioConfig &config, const RunOptions &options, std::ostream &log) {
    config.validate();
    fs::create_directories(options.output_dir);
    Context ctx{config, options, log};
    if (subcommand == "dfs") {
        run_dfs(ctx);
    } else if (subcommand == "bounds") {
        run_bounds(ctx);
    } else if (subcommand == "simulate") {
        run_simulate(ctx);
    } else if (subcommand == "optimize") {
        run_optimize(ctx);
    } else if (subcommand == "tomography") {
        run_tomography(ctx);
    } else if (subcommand == "calibrate") {
        run_calibrate(ctx);
    } else if (subcommand == "sweep") {
        run_sweep(ctx);
    } else {
        throw Error("unknown subcommand '" + subcommand + "'");
    }
}

}  // namespace dfsense
