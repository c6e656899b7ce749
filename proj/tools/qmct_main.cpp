// Command-line front end: declares experiments from a JSON config file or
// flags, dispatches them to the measurement harness, and writes manifest +
// CSV artifacts per run directory.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmct/config.hpp"
#include "qmct/errors.hpp"
#include "qmct/experiments.hpp"
#include "qmct/io.hpp"
#include "qmct/version.hpp"

namespace {

using namespace qmct;

std::string describe_kind(const std::string& kind) {
    if (kind == "ed-gap")
        return "ed-gap: exact lowest eigenvalues and tunneling splitting "
               "Delta(L) for a spin model, plus the exponential fit of "
               "1/Delta vs L when three or more sizes are given.\n"
               "keys: topology, gamma, h, spatial_periodic, p, L, window, "
               "out\n";
    if (kind == "wkb")
        return "wkb: semiclassical barrier report for the mean-field "
               "potential at (gamma, h): extrema landscape, quadrature "
               "barrier action, and for h=0 the closed-form per-site decay "
               "rate c with the quadrature cross-check (action = 2c).  With "
               "L values it also tabulates the splitting b*exp(-L c).\n"
               "keys: gamma, h, L, out\n";
    if (kind == "pimc-spin")
        return "pimc-spin: first-passage tunneling times of the "
               "periodic-imaginary-time spin sampler (discrete Trotter grid "
               "by default, continuous time via engine=pimc-ct) from the "
               "polarized start; the escape rate is expected to scale as the "
               "inverse squared splitting 1/Delta^2.\n"
               "keys: topology, gamma, h, L, beta, P, engine, flavor, "
               "slice_threshold, stop_fractions, n_runs, budget, threads, "
               "master_seed, out\n";
    if (kind == "pigs-spin")
        return "pigs-spin: first-passage tunneling times of the "
               "open-boundary (ground-state projection) spin sampler; open "
               "imaginary-time boundaries admit single domain walls, so the "
               "escape time scales as the inverse splitting 1/Delta instead "
               "of 1/Delta^2.\n"
               "keys: topology, gamma, h, L, beta, P, flavor, "
               "slice_threshold, stop_fractions, n_runs, budget, threads, "
               "master_seed, out\n";
    if (kind == "pimc-well")
        return "pimc-well: first-passage times of the Metropolis ring "
               "polymer in the quartic double well, from the metastable "
               "minimum until a quarter of the beads cross the barrier "
               "midpoint.\n"
               "keys: lambda, mass, beta (T = 1/beta), P, pimc_step, "
               "stop_fractions, n_runs, budget, threads, master_seed, out\n";
    if (kind == "pimd-well")
        return "pimd-well: same protocol driven by damped Langevin dynamics "
               "(one sweep = P steps).\n"
               "keys: lambda, mass, beta, P, langevin.delta, "
               "langevin.gamma_friction, stop_fractions, n_runs, budget, "
               "threads, master_seed, out\n";
    if (kind == "temp-scan")
        return "temp-scan: mean first-passage time across a beta grid and "
               "several sizes, locating the thermal-to-quantum crossover: "
               "at high temperature the time is size-independent and "
               "Arrhenius-suppressed, exp(barrier/T); at low temperature it "
               "is temperature-independent but grows with size.\n"
               "keys: topology, gamma, h, L, betas, arrhenius_window, P, "
               "engine, n_runs, budget, threads, master_seed, out\n";
    if (kind == "size-scan")
        return "size-scan: first-passage times over system sizes with the "
               "bootstrap exponential fit ln(mean time) vs L (spin engines), "
               "or over the quartic couplings `lambdas` with abscissa "
               "ln(1/Delta^2) from the grid solver (well engines).\n"
               "keys: engine, topology, gamma, h, L, beta, P, window, "
               "lambdas, mass, n_runs, budget, n_boot, threads, master_seed, "
               "out\n";
    if (kind == "fit")
        return "fit: re-fit an existing records.csv (exponential in L) "
               "without re-running simulations.\n"
               "keys: records_file, window, stop_fractions, n_boot, "
               "master_seed, out\n";
    if (kind == "compare")
        return "compare: verdict on a measured exponent vs the exact-"
               "diagonalization gap decay rate; ed_mode=squared tests a "
               "1/Delta^2 law, ed_mode=linear a 1/Delta law; pass means "
               "agreement within 3 combined sigma.\n"
               "keys: qmc_b, qmc_err, ed_mode, topology, gamma, h, L, "
               "window, out\n";
    throw ConfigError("unknown experiment kind '" + kind + "'");
}

std::string resolve_out_dir(const ExperimentConfig& cfg) {
    std::string dir = cfg.out.empty() ? "runs/" + cfg.kind : cfg.out;
    if (!dir.empty() && dir.front() != '/') {
        if (const char* root = std::getenv("QMCT_OUTPUT_ROOT"))
            dir = std::string(root) + "/" + dir;
    }
    return dir;
}

SummaryRow summary_from_point(const std::string& label, const PointSummary& p,
                              int L, double gamma, double beta, int P) {
    SummaryRow row;
    row.label = label;
    row.x = p.x;
    row.L = L;
    row.gamma = gamma;
    row.beta = beta;
    row.P = P;
    row.mean = p.stats.mean;
    row.stderr_mean = p.stats.stderr_mean;
    row.median = p.stats.median;
    row.n = static_cast<long long>(p.stats.n);
    row.n_censored = p.n_censored;
    return row;
}

void emit_manifest(const ExperimentConfig& cfg, const std::string& dir) {
    write_text_file(dir + "/manifest",
                    config_to_json_text(cfg, qmct::kVersion));
}

// ---------------------------------------------------------------------------
// Experiment drivers

int run_ed_gap(const ExperimentConfig& cfg, const std::string& dir) {
    if (cfg.L_values.empty()) throw ConfigError("ed-gap needs 'L'");
    auto make = [&](int L) { return model_from_config(cfg, L); };
    std::vector<FitRow> fits;
    GapScanResult scan;
    if (cfg.L_values.size() >= 3) {
        double lo = cfg.window_lo, hi = cfg.window_hi;
        if (lo == 0.0 && hi == 0.0) {
            lo = *std::min_element(cfg.L_values.begin(), cfg.L_values.end());
            hi = *std::max_element(cfg.L_values.begin(), cfg.L_values.end());
        }
        scan = ed_gap_scan(make, cfg.L_values, lo, hi);
        FitRow row;
        row.name = "log_inv_delta_vs_L";
        row.fit = scan.gap_fit;
        fits.push_back(row);
        std::printf("gap decay rate d(-ln Delta)/dL = %.6f +- %.6f\n",
                    scan.gap_fit.slope, scan.gap_fit.slope_stderr);
        std::printf("1/Delta^2 exponent             = %.6f +- %.6f\n",
                    2.0 * scan.gap_fit.slope, 2.0 * scan.gap_fit.slope_stderr);
    } else {
        for (int L : cfg.L_values) {
            GapScanPoint pt;
            pt.L = L;
            const SpinModel model = make(L);
            pt.spectrum = model.topology == Topology::Chain
                              ? (L <= 10 ? gap_dense(model) : gap_sparse(model))
                              : gap_symmetric_sector(model);
            std::printf("L=%d  Delta=%s  (E0=%s, E1=%s)\n", L,
                        fmt_full(pt.spectrum.delta).c_str(),
                        fmt_full(pt.spectrum.eigenvalues[0]).c_str(),
                        fmt_full(pt.spectrum.eigenvalues[1]).c_str());
            scan.points.push_back(std::move(pt));
        }
    }
    write_spectrum_csv(dir + "/records.csv", scan.points, cfg.topology,
                       cfg.gamma, cfg.h);
    std::vector<SummaryRow> rows;
    for (const auto& p : scan.points) {
        SummaryRow row;
        row.label = "delta";
        row.x = p.L;
        row.L = p.L;
        row.gamma = cfg.gamma;
        row.beta = 0.0;
        row.P = 0;
        row.mean = p.spectrum.delta;
        row.n = 1;
        rows.push_back(row);
    }
    write_summary_csv(dir + "/summary.csv", rows);
    write_fits_csv(dir + "/fits.csv", fits);
    return 0;
}

int run_wkb(const ExperimentConfig& cfg, const std::string& dir) {
    const WkbReport rep = wkb_report(cfg.gamma, cfg.h);
    std::vector<SummaryRow> rows;
    {
        SummaryRow row;
        row.label = "action_quadrature";
        row.gamma = cfg.gamma;
        row.mean = rep.action_quadrature;
        row.n = 1;
        rows.push_back(row);
    }
    if (rep.has_closed_form) {
        SummaryRow row;
        row.label = "c_closed";
        row.gamma = cfg.gamma;
        row.mean = rep.c_closed;
        row.n = 1;
        rows.push_back(row);
        row.label = "cross_check_dev";
        row.mean = rep.cross_check_dev;
        rows.push_back(row);
        std::printf("c(%.4g) = %.9f   quadrature action/2 deviates by %.3e\n",
                    cfg.gamma, rep.c_closed, rep.cross_check_dev);
    } else {
        std::printf("barrier action a(e1) = %.9f (no h=0 closed form)\n",
                    rep.action_quadrature);
    }
    for (const auto& ex : rep.potential.extrema) {
        SummaryRow row;
        row.label = ex.kind == ExtremumKind::Max ? "extremum_max"
                    : ex.kind == ExtremumKind::GlobalMin ? "extremum_global_min"
                                                         : "extremum_local_min";
        row.gamma = cfg.gamma;
        row.x = ex.m;
        row.mean = ex.e;
        row.n = 1;
        rows.push_back(row);
    }
    for (int L : cfg.L_values) {
        if (!rep.has_closed_form) break;
        const SplittingForm sf = splitting_closed_form(cfg.gamma, L);
        SummaryRow row;
        row.label = "splitting_closed_form";
        row.gamma = cfg.gamma;
        row.x = L;
        row.L = L;
        row.mean = sf.delta;
        row.n = 1;
        rows.push_back(row);
    }
    write_summary_csv(dir + "/summary.csv", rows);
    write_fits_csv(dir + "/fits.csv", {});
    write_text_file(dir + "/records.csv", "label,value\n");
    return 0;
}

int run_first_passage_kind(const ExperimentConfig& cfg, const std::string& dir) {
    FirstPassageConfig fp = first_passage_from_config(cfg);
    const FirstPassageEnsemble ens =
        measure_first_passage(fp, cfg.n_runs, cfg.budget);
    write_records_csv(dir + "/records.csv", ens.records);
    std::vector<SummaryRow> rows;
    for (double f : fp.stop_fractions) {
        const auto samples = uncensored_samples(ens.records, f);
        const auto point = summarize_point(
            engine_uses_spins(fp.engine) ? fp.model.L : 0, samples,
            censored_count(ens.records, f));
        SummaryRow row = summary_from_point(
            "stop_fraction_" + fmt_full(f), point,
            engine_uses_spins(fp.engine) ? fp.model.L : 0,
            engine_uses_spins(fp.engine) ? fp.model.gamma : fp.well.lambda,
            fp.beta, fp.P);
        rows.push_back(row);
        std::printf("threshold %.3g: mean xi = %.6g +- %.3g  (median %.6g, "
                    "censored %d/%d)\n",
                    f, point.stats.mean, point.stats.stderr_mean,
                    point.stats.median, point.n_censored, point.n_total);
    }
    write_summary_csv(dir + "/summary.csv", rows);
    write_fits_csv(dir + "/fits.csv", {});
    return 0;
}

int run_size_scan(const ExperimentConfig& cfg, const std::string& dir) {
    FirstPassageConfig fp = first_passage_from_config(cfg);
    std::vector<SummaryRow> rows;
    std::vector<FitRow> fits;

    if (engine_uses_spins(fp.engine)) {
        if (cfg.L_values.size() < 3)
            throw ConfigError("size-scan needs at least 3 sizes in 'L'");
        double lo = cfg.window_lo, hi = cfg.window_hi;
        if (lo == 0.0 && hi == 0.0) {
            lo = *std::min_element(cfg.L_values.begin(), cfg.L_values.end());
            hi = *std::max_element(cfg.L_values.begin(), cfg.L_values.end());
        }
        auto make = [&](int L) { return model_from_config(cfg, L); };
        const SizeScanResult scan =
            size_scan(fp, make, cfg.L_values, cfg.n_runs, cfg.budget, lo, hi,
                      cfg.n_boot);
        write_records_csv(dir + "/records.csv", scan.records);
        for (std::size_t i = 0; i < scan.points.size(); ++i)
            rows.push_back(summary_from_point("L", scan.points[i],
                                              cfg.L_values[i], cfg.gamma,
                                              cfg.beta, fp.P));
        if (!scan.usable) {
            std::printf("more than half the runs censored in the fit window; "
                        "no fit emitted\n");
        } else {
            FitRow row;
            row.name = "ln_xi_vs_L";
            row.fit = scan.fit;
            fits.push_back(row);
            std::printf("b = %.6f +- %.6f  (window %g..%g)\n", scan.fit.slope,
                        scan.fit.slope_stderr, lo, hi);
        }
    } else {
        if (cfg.lambdas.size() < 3)
            throw ConfigError(
                "size-scan with a well engine needs at least 3 'lambdas'");
        const WellScanResult scan =
            well_scan(fp, cfg.lambdas, cfg.n_runs, cfg.budget, cfg.n_boot);
        write_records_csv(dir + "/records.csv", scan.records);
        for (std::size_t i = 0; i < scan.points.size(); ++i) {
            SummaryRow row = summary_from_point("log_inv_delta_sq",
                                                scan.points[i], 0,
                                                scan.lambdas[i], cfg.beta,
                                                fp.P);
            rows.push_back(row);
        }
        if (!scan.usable) {
            std::printf("more than half the runs censored; no fit emitted\n");
        } else {
            FitRow row;
            row.name = "ln_xi_vs_log_inv_delta_sq";
            row.fit = scan.fit;
            fits.push_back(row);
            std::printf("slope of ln xi vs ln(1/Delta^2) = %.4f +- %.4f\n",
                        scan.fit.slope, scan.fit.slope_stderr);
        }
    }
    write_summary_csv(dir + "/summary.csv", rows);
    write_fits_csv(dir + "/fits.csv", fits);
    return 0;
}

int run_temp_scan(const ExperimentConfig& cfg, const std::string& dir) {
    if (cfg.L_values.empty()) throw ConfigError("temp-scan needs 'L'");
    if (cfg.betas.size() < 2)
        throw ConfigError("temp-scan needs at least 2 'betas'");
    FirstPassageConfig fp = first_passage_from_config(cfg);
    auto make = [&](int L) { return model_from_config(cfg, L); };
    const TempScanResult scan =
        temperature_scan(fp, make, cfg.L_values, cfg.betas, cfg.n_runs,
                         cfg.budget, cfg.arrhenius_lo, cfg.arrhenius_hi);
    std::vector<SummaryRow> rows;
    for (const auto& r : scan.rows)
        rows.push_back(summary_from_point("beta", r.summary, r.L, cfg.gamma,
                                          r.beta, fp.P));
    write_summary_csv(dir + "/summary.csv", rows);
    write_text_file(dir + "/records.csv",
                    "see summary.csv; per-run records are aggregated\n");
    std::vector<FitRow> fits;
    if (scan.arrhenius.n_points >= 3) {
        FitRow row;
        row.name = "arrhenius_ln_xi_vs_beta";
        row.fit = scan.arrhenius;
        fits.push_back(row);
        std::printf("Arrhenius slope d(ln xi)/d(beta) = %.4f +- %.4f\n",
                    scan.arrhenius.slope, scan.arrhenius.slope_stderr);
    }
    auto verdict_row = [](const std::string& name, bool pass) {
        FitRow row;
        row.name = name;
        row.has_ref = true;
        row.verdict = pass ? "pass" : "fail";
        return row;
    };
    fits.push_back(verdict_row("high_t_size_independent",
                               scan.high_t_size_independent));
    fits.push_back(
        verdict_row("low_t_beta_independent", scan.low_t_beta_independent));
    fits.push_back(verdict_row("low_t_size_dependent", scan.low_t_size_dependent));
    write_fits_csv(dir + "/fits.csv", fits);
    std::printf("high-T size-independent: %s; low-T beta-independent: %s; "
                "low-T size-dependent: %s\n",
                scan.high_t_size_independent ? "yes" : "no",
                scan.low_t_beta_independent ? "yes" : "no",
                scan.low_t_size_dependent ? "yes" : "no");
    return 0;
}

int run_fit(const ExperimentConfig& cfg, const std::string& dir) {
    if (cfg.records_file.empty()) throw ConfigError("fit needs 'records_file'");
    const auto records = read_records_csv(cfg.records_file);
    if (records.empty()) throw ConfigError("no records to fit");
    const double frac = *std::min_element(cfg.stop_fractions.begin(),
                                          cfg.stop_fractions.end());
    std::vector<int> Ls;
    for (const auto& r : records)
        if (r.threshold == frac &&
            std::find(Ls.begin(), Ls.end(), r.L) == Ls.end())
            Ls.push_back(r.L);
    std::sort(Ls.begin(), Ls.end());
    std::vector<PointSummary> points;
    std::vector<std::vector<double>> samples;
    std::vector<SummaryRow> rows;
    for (int L : Ls) {
        std::vector<FirstPassageRecord> sub;
        for (const auto& r : records)
            if (r.L == L) sub.push_back(r);
        auto xs = uncensored_samples(sub, frac);
        points.push_back(summarize_point(L, xs, censored_count(sub, frac)));
        rows.push_back(summary_from_point("L", points.back(), L,
                                          sub.front().gamma, sub.front().beta,
                                          sub.front().P));
        samples.push_back(std::move(xs));
    }
    double lo = cfg.window_lo, hi = cfg.window_hi;
    if (lo == 0.0 && hi == 0.0) {
        lo = Ls.front();
        hi = Ls.back();
    }
    Rng boot_rng = Rng::derive(cfg.master_seed, {0xB007ull});
    const FitResult fit = fit_exponential_bootstrap(points, samples, lo, hi,
                                                    cfg.n_boot, boot_rng);
    FitRow row;
    row.name = "ln_xi_vs_L";
    row.fit = fit;
    write_fits_csv(dir + "/fits.csv", {row});
    write_summary_csv(dir + "/summary.csv", rows);
    write_text_file(dir + "/records.csv",
                    "refit of " + cfg.records_file + "\n");
    std::printf("b = %.6f +- %.6f  (window %g..%g, %d points)\n", fit.slope,
                fit.slope_stderr, lo, hi, fit.n_points);
    return 0;
}

int run_compare(const ExperimentConfig& cfg, const std::string& dir) {
    if (!(cfg.qmc_err > 0.0))
        throw ConfigError("compare needs 'qmc_b' and 'qmc_err'");
    if (cfg.L_values.size() < 3)
        throw ConfigError("compare needs at least 3 sizes in 'L'");
    double lo = cfg.window_lo, hi = cfg.window_hi;
    if (lo == 0.0 && hi == 0.0) {
        lo = *std::min_element(cfg.L_values.begin(), cfg.L_values.end());
        hi = *std::max_element(cfg.L_values.begin(), cfg.L_values.end());
    }
    auto make = [&](int L) { return model_from_config(cfg, L); };
    const GapScanResult scan = ed_gap_scan(make, cfg.L_values, lo, hi);
    FitResult qmc;
    qmc.slope = cfg.qmc_b;
    qmc.slope_stderr = cfg.qmc_err;
    const ComparisonVerdict v = exponent_comparison(
        qmc, scan.gap_fit.slope, scan.gap_fit.slope_stderr,
        cfg.ed_mode == "squared" ? ComparisonMode::Squared
                                 : ComparisonMode::Linear);
    write_spectrum_csv(dir + "/records.csv", scan.points, cfg.topology,
                       cfg.gamma, cfg.h);
    write_summary_csv(dir + "/summary.csv", {});
    FitRow row;
    row.name = "exponent_comparison_" + cfg.ed_mode;
    row.fit = qmc;
    row.has_ref = true;
    row.ref = v.b_ref;
    row.ref_err = v.b_ref_err;
    row.discrepancy_sigma = v.discrepancy_sigma;
    row.verdict = v.pass ? "pass" : "fail";
    write_fits_csv(dir + "/fits.csv", {row});
    std::printf("measured %.4f +- %.4f vs reference %.4f +- %.4f -> %.2f "
                "sigma: %s\n",
                v.b_qmc, v.b_qmc_err, v.b_ref, v.b_ref_err,
                v.discrepancy_sigma, v.pass ? "pass" : "fail");
    return v.pass ? 0 : 1;
}

int dispatch(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg);
    ensure_directory(dir);
    emit_manifest(cfg, dir);
    if (cfg.kind == "ed-gap") return run_ed_gap(cfg, dir);
    if (cfg.kind == "wkb") return run_wkb(cfg, dir);
    if (cfg.kind == "pimc-spin" || cfg.kind == "pigs-spin" ||
        cfg.kind == "pimc-well" || cfg.kind == "pimd-well")
        return run_first_passage_kind(cfg, dir);
    if (cfg.kind == "size-scan") return run_size_scan(cfg, dir);
    if (cfg.kind == "temp-scan") return run_temp_scan(cfg, dir);
    if (cfg.kind == "fit") return run_fit(cfg, dir);
    if (cfg.kind == "compare") return run_compare(cfg, dir);
    throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-passage tunneling-time laboratory"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand(
        "run", "run an experiment from a config file or a kind name + flags");
    // frees the short name "h" for the longitudinal-field option below
    run->set_help_flag("--help", "print this help message and exit");
    std::string target;
    run->add_option("config", target,
                    "config file path, or one of the experiment kinds")
        ->required();
    std::string opt_model, opt_engine, opt_L, opt_out, opt_flavor, opt_lambdas,
        opt_betas;
    double opt_gamma = -1.0, opt_h = 0.0, opt_beta = -1.0, opt_lambda = -1.0,
           opt_qmc_b = 0.0, opt_qmc_err = -1.0;
    long long opt_budget = -1;
    int opt_P = -1, opt_runs = -1, opt_threads = -1;
    std::uint64_t opt_seed = 0;
    bool have_seed = false, opt_h_set = false;
    std::vector<std::string> opt_sets;
    run->add_option("--model", opt_model, "topology: chain|fully-connected|p-spin");
    run->add_option("--engine", opt_engine,
                    "pimc-discrete|pimc-ct|pigs|pimc-well|pimd-well");
    run->add_option("--L", opt_L, "sizes: 14, 12,14,16 or 12..18");
    run->add_option("--gamma", opt_gamma, "transverse field");
    run->add_option("--h", opt_h, "longitudinal field")
        ->each([&](const std::string&) { opt_h_set = true; });
    run->add_option("--beta", opt_beta, "inverse temperature");
    run->add_option("--betas", opt_betas, "comma-separated beta grid");
    run->add_option("--lambda", opt_lambda, "double-well quartic coupling");
    run->add_option("--lambdas", opt_lambdas, "comma-separated couplings");
    run->add_option("--P", opt_P, "Trotter slices / beads");
    run->add_option("--n-runs", opt_runs, "independent runs per point");
    run->add_option("--budget", opt_budget, "sweep budget per run");
    run->add_option("--seed", opt_seed, "master seed")
        ->each([&](const std::string&) { have_seed = true; });
    run->add_option("--threads", opt_threads, "worker threads (0 = cores)");
    run->add_option("--flavor", opt_flavor, "cluster flavor: sw|wolff");
    run->add_option("--qmc-b", opt_qmc_b, "measured exponent for compare");
    run->add_option("--qmc-err", opt_qmc_err,
                    "standard error of the measured exponent");
    run->add_option("--out", opt_out, "output directory");
    run->add_option("--set", opt_sets,
                    "override any config key, e.g. --set langevin.delta=0.01");

    // --- list-experiments / describe ---
    auto* list = app.add_subcommand("list-experiments",
                                    "list the available experiment kinds");
    auto* describe =
        app.add_subcommand("describe", "explain one experiment kind");
    std::string describe_target;
    describe->add_option("kind", describe_target, "experiment kind")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& k : experiment_kinds())
                std::printf("%s\n", k.c_str());
            return 0;
        }
        if (describe->parsed()) {
            std::printf("%s", describe_kind(describe_target).c_str());
            return 0;
        }

        ExperimentConfig cfg;
        if (is_experiment_kind(target)) {
            cfg.kind = target;
        } else {
            cfg = load_config_file(target);
        }
        if (!opt_model.empty()) cfg.topology = opt_model;
        if (!opt_engine.empty()) cfg.engine = opt_engine;
        if (!opt_L.empty()) cfg.L_values = parse_int_list(opt_L);
        if (opt_gamma >= 0.0) cfg.gamma = opt_gamma;
        if (opt_h_set) cfg.h = opt_h;
        if (opt_beta > 0.0) cfg.beta = opt_beta;
        if (!opt_betas.empty()) cfg.betas = parse_double_list(opt_betas);
        if (opt_lambda > 0.0) cfg.lambda = opt_lambda;
        if (!opt_lambdas.empty()) cfg.lambdas = parse_double_list(opt_lambdas);
        if (opt_P > 0) cfg.P = opt_P;
        if (opt_runs > 0) cfg.n_runs = opt_runs;
        if (opt_budget > 0) cfg.budget = opt_budget;
        if (have_seed) cfg.master_seed = opt_seed;
        if (opt_threads >= 0) cfg.threads = opt_threads;
        if (!opt_flavor.empty()) cfg.flavor = opt_flavor;
        if (!opt_out.empty()) cfg.out = opt_out;
        if (opt_qmc_err > 0.0) {
            cfg.qmc_b = opt_qmc_b;
            cfg.qmc_err = opt_qmc_err;
        }
        for (const auto& kv : opt_sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (cfg.kind.empty())
            throw ConfigError("config is missing 'kind'");
        validate_config(cfg);
        return dispatch(cfg);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = {{"type", "error"}, {"message", e.what()}};
        if (dynamic_cast<const ConfigError*>(&e))
            err["error"]["type"] = "config";
        else if (dynamic_cast<const DomainError*>(&e))
            err["error"]["type"] = "domain";
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return dynamic_cast<const ConfigError*>(&e) ? 2 : 3;
    }
}
