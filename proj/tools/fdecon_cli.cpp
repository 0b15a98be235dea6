// fdecon: batch CLI for the functional deconvolution estimator.
// Subcommands: simulate, estimate, bench, rates. Configuration comes from a
// key-value config file; every output directory gets a manifest sufficient to
// reproduce its artifacts bit-exactly.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "fdecon/bench.hpp"
#include "fdecon/config.hpp"
#include "fdecon/csvio.hpp"
#include "fdecon/estimator.hpp"
#include "fdecon/model.hpp"

namespace fs = std::filesystem;
using namespace fdec;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    bool force = false;
    int threads = 1;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "configuration file")->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed_override, "override the config seed");
    cmd->add_flag("--force", o.force, "overwrite existing outputs");
    cmd->add_option("--threads", o.threads, "worker threads for Monte Carlo runs");
    cmd->add_flag("-v", o.verbosity, "increase verbosity (repeatable)");
}

void prepare_out_dir(const CommonOpts& o, const std::vector<std::string>& outputs) {
    fs::create_directories(o.out_dir);
    if (o.force) return;
    for (const auto& name : outputs) {
        const auto p = fs::path(o.out_dir) / name;
        if (fs::exists(p))
            throw std::runtime_error("refusing to overwrite " + p.string() + " (use --force)");
    }
}

KernelSpec kernel_from_config(const Config& cfg) {
    KernelSpec k;
    const std::string fam = cfg.get_str("kernel.family", "pure_power");
    if (fam == "pure_power") k.family = KernelFamily::PurePower;
    else if (fam == "smooth_power") k.family = KernelFamily::SmoothPower;
    else throw std::runtime_error("kernel.family must be pure_power or smooth_power, got " + fam);
    k.nu = cfg.get_double("kernel.nu");
    k.modulated = cfg.get_bool("kernel.modulated", false);
    k.validate();
    return k;
}

NoiseGenerator generator_from_config(const Config& cfg) {
    const std::string g = cfg.get_str("noise.generator", "fgn");
    if (g == "fgn") return NoiseGenerator::Fgn;
    if (g == "farima") return NoiseGenerator::Farima;
    if (g == "iid") return NoiseGenerator::Iid;
    throw std::runtime_error("noise.generator must be fgn, farima or iid, got " + g);
}

std::vector<double> alphas_from_config(const Config& cfg, int m) {
    if (cfg.has("noise.alphas")) {
        auto v = cfg.get_double_list("noise.alphas");
        if (static_cast<int>(v.size()) != m)
            throw std::runtime_error("noise.alphas must list exactly M values");
        return v;
    }
    return std::vector<double>(m, cfg.get_double("noise.alpha", 1.0));
}

NoiseSpec noise_from_config(const Config& cfg, int m, const CommonOpts& o) {
    NoiseSpec n;
    n.sigma = cfg.get_double("sigma");
    n.generator = generator_from_config(cfg);
    n.alphas = alphas_from_config(cfg, m);
    n.seed = o.seed_override ? *o.seed_override
                             : static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    n.validate();
    return n;
}

void write_manifest(const fs::path& dir, Config cfg, std::uint64_t seed) {
    cfg.set("seed", std::to_string(seed));
    write_text_atomic(dir / "manifest.cfg", cfg.dump());
}

double resolve_rho(const Config& cfg, const KernelSpec& kernel, const NoiseSpec& noise,
                   double nu, int verbosity) {
    const std::string rho_str = cfg.get_str("rho", "auto");
    if (rho_str != "auto") {
        std::size_t pos = 0;
        const double v = std::stod(rho_str, &pos);
        if (pos != rho_str.size() || v < 0)
            throw std::runtime_error("rho must be a nonnegative number or 'auto'");
        return v;
    }
    const auto cal = calibrate_rho(kernel, noise, nu);
    if (verbosity > 0)
        std::cerr << "calibrated rho_min = " << cal.rho_min << " (c2_hat = " << cal.c2_hat
                  << ", K1_hat = " << cal.k1_hat << ", sigma_o^2 = " << cal.sigma_o_sq << ")\n";
    return cal.rho_min;
}

int cmd_simulate(const CommonOpts& o) {
    auto cfg = Config::parse_file(o.config_path);
    const int n = static_cast<int>(cfg.get_int("N"));
    const int m = static_cast<int>(cfg.get_int("M"));
    const auto fn = find_test_function(cfg.get_str("function"));
    const auto kernel = kernel_from_config(cfg);
    const auto noise = noise_from_config(cfg, m, o);
    const auto replicate = static_cast<std::uint64_t>(cfg.get_int("replicate", 0));

    prepare_out_dir(o, {"observed.grid", "truth.grid", "manifest.cfg"});
    const auto y = simulate(fn, kernel, noise, n, m, replicate);
    const auto truth = fn.sample_grid(n, m);
    write_grid(fs::path(o.out_dir) / "observed.grid", y.data);
    write_grid(fs::path(o.out_dir) / "truth.grid", truth);
    if (cfg.get_bool("csv_export", false)) {
        write_grid_csv(fs::path(o.out_dir) / "observed.csv", y.data);
        write_grid_csv(fs::path(o.out_dir) / "truth.csv", truth);
    }
    write_manifest(o.out_dir, cfg, noise.seed);
    if (o.verbosity > 0)
        std::cerr << "simulated " << n << "x" << m << " grid for '" << fn.name << "'\n";
    std::cout << "wrote " << (fs::path(o.out_dir) / "observed.grid").string() << "\n";
    return 0;
}

int cmd_estimate(const CommonOpts& o) {
    auto cfg = Config::parse_file(o.config_path);
    ObservationGrid y;
    y.data = read_grid(cfg.get_str("input"));
    y.validate();
    const int m = y.n_space();
    const auto kernel = kernel_from_config(cfg);
    auto noise = noise_from_config(cfg, m, o);

    EstimatorParams params;
    params.nu = kernel.nu;
    params.sigma = noise.sigma;
    params.alphas = noise.alphas;
    params.rho = resolve_rho(cfg, kernel, noise, kernel.nu, o.verbosity);

    prepare_out_dir(o, {"estimate.grid", "coefficients.csv", "manifest.cfg"});
    Basis2D basis;
    const auto res = estimate(y, kernel, params, basis);
    write_grid(fs::path(o.out_dir) / "estimate.grid", res.f_hat);

    {
        CsvWriter csv(fs::path(o.out_dir) / "coefficients.csv",
                      {"j1", "k1", "j2", "k2", "re", "im", "threshold", "kept"});
        const auto& t = res.coeffs;
        auto level_of = [](int idx, int* j, int* k) {
            if (idx == 0) { *j = -1; *k = 0; return; }  // scaling layer
            *j = 0;
            while ((2 << *j) <= idx) ++*j;
            *k = idx - (1 << *j);
        };
        for (int ti = 0; ti < t.n_time_idx(); ++ti)
            for (int si = 0; si < t.n_space_idx(); ++si) {
                int j1, k1, j2, k2;
                level_of(ti, &j1, &k1);
                level_of(si, &j2, &k2);
                const cplx z = t.at(ti, si);
                const bool thresholded = j1 >= 0;
                const double lam = thresholded ? res.thresholds[j1] : 0.0;
                const bool kept = !thresholded || std::abs(z) > lam;
                csv.row({std::to_string(j1), std::to_string(k1), std::to_string(j2),
                         std::to_string(k2), format_double(z.real()), format_double(z.imag()),
                         format_double(lam), kept ? "1" : "0"});
            }
    }

    cfg.set("rho_used", format_double(params.rho));
    write_manifest(o.out_dir, cfg, noise.seed);

    std::cout << "levels J1=" << res.levels.j1_levels << " J2=" << res.levels.j2_levels
              << (res.levels.j1_capped || res.levels.j2_capped ? " (grid-capped)" : "") << "\n";
    std::cout << "kept " << res.kept << " of " << res.total << " thresholded coefficients\n";

    if (cfg.has("truth")) {
        const auto truth = read_grid(cfg.get_str("truth"));
        std::cout << "risk " << format_double(empirical_risk(res.f_hat, truth)) << "\n";
    }
    return 0;
}

int cmd_bench(const CommonOpts& o) {
    auto cfg = Config::parse_file(o.config_path);
    ExperimentPlan plan;
    plan.function = cfg.get_str("function");
    plan.kernel = kernel_from_config(cfg);
    plan.generator = generator_from_config(cfg);
    plan.sigma = cfg.get_double("sigma");
    plan.replicates = static_cast<int>(cfg.get_int("replicates", 50));
    plan.log_deflate = cfg.get_bool("log_deflate", true);
    plan.seed = o.seed_override ? *o.seed_override
                                : static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    if (cfg.has("noise.alphas")) plan.alphas = cfg.get_double_list("noise.alphas");
    else plan.alphas = {cfg.get_double("noise.alpha", 1.0)};

    const std::string rho_str = cfg.get_str("rho", "auto");
    if (rho_str != "auto") plan.rho = std::stod(rho_str);

    for (const auto& point : cfg.get_all("ladder.point")) {
        std::istringstream is(point);
        int m = 0, n = 0;
        if (!(is >> m >> n))
            throw std::runtime_error("ladder.point must be 'M N', got '" + point + "'");
        plan.ladder.emplace_back(m, n);
    }
    if (plan.ladder.empty()) throw std::runtime_error("bench config needs ladder.point entries");

    prepare_out_dir(o, {"risks.csv", "report.csv", "manifest.cfg"});
    const auto report = run_experiment(plan, o.out_dir, o.threads);
    cfg.set("rho_used", format_double(report.rho_used));
    write_manifest(o.out_dir, cfg, plan.seed);

    std::cout << "regime " << to_string(report.regime.regime) << " theoretical exponent "
              << report.regime.exponent << "\n";
    std::cout << "fitted slope " << report.fitted_slope << " (stderr " << report.slope_stderr
              << (report.log_deflated ? ", log-deflated" : "") << ")\n";
    for (const auto& pt : report.ladder)
        std::cout << "  M=" << pt.m << " N=" << pt.n << " risk " << pt.risk << " se " << pt.se
                  << "\n";
    return 0;
}

int cmd_rates(const CommonOpts& o) {
    auto cfg = Config::parse_file(o.config_path);
    struct Row { double s1, s2, p, nu; };
    std::vector<Row> rows;
    for (const auto& line : cfg.get_all("rates.case")) {
        std::istringstream is(line);
        Row r{};
        if (!(is >> r.s1 >> r.s2 >> r.p >> r.nu))
            throw std::runtime_error("rates.case must be 's1 s2 p nu', got '" + line + "'");
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error("rates config needs rates.case entries");

    prepare_out_dir(o, {"rates.csv"});
    CsvWriter csv(fs::path(o.out_dir) / "rates.csv",
                  {"s1", "s2", "p", "nu", "regime", "exponent", "lower_exponent", "log_power",
                   "xi1", "xi2"});
    std::cout << "s1\ts2\tp\tnu\tregime\texponent\tlower\txi1\txi2\n";
    for (const auto& r : rows) {
        BesovSpec b;
        b.s1 = r.s1;
        b.s2 = r.s2;
        b.p = r.p;
        const auto res = theoretical_exponent(b, r.nu);
        csv.row({format_double(r.s1), format_double(r.s2), format_double(r.p), format_double(r.nu),
                 to_string(res.regime), format_double(res.exponent),
                 format_double(res.lower_exponent), format_double(res.log_power),
                 res.xi1 ? "1" : "0", res.xi2 ? "1" : "0"});
        std::cout << r.s1 << '\t' << r.s2 << '\t' << r.p << '\t' << r.nu << '\t'
                  << to_string(res.regime) << '\t' << res.exponent << '\t' << res.lower_exponent
                  << '\t' << res.xi1 << '\t' << res.xi2 << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"functional Fourier deconvolution estimator and benchmark harness"};
    app.require_subcommand(1);

    CommonOpts sim_o, est_o, bench_o, rates_o;
    auto* sim = app.add_subcommand("simulate", "forward-simulate an observation grid");
    add_common(sim, sim_o);
    auto* est = app.add_subcommand("estimate", "run the thresholding estimator on a grid file");
    add_common(est, est_o);
    auto* bench = app.add_subcommand("bench", "Monte Carlo convergence-rate experiment");
    add_common(bench, bench_o);
    auto* rates = app.add_subcommand("rates", "print the theoretical regime table");
    add_common(rates, rates_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_o);
        if (est->parsed()) return cmd_estimate(est_o);
        if (bench->parsed()) return cmd_bench(bench_o);
        if (rates->parsed()) return cmd_rates(rates_o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
