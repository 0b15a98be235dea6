#include "fdecon/bench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fdecon/csvio.hpp"

namespace fdec {

void BesovSpec::validate() const {
    if (p < 1.0 || q < 1.0) throw std::domain_error("besov: p and q must be >= 1");
    if (radius <= 0.0) throw std::domain_error("besov: radius must be positive");
    if (std::min(s1, s2) < std::max(1.0 / p, 0.5))
        throw std::domain_error("besov: requires min(s1,s2) >= max(1/p, 1/2)");
}

std::string to_string(RateRegime r) {
    switch (r) {
        case RateRegime::DenseSpace: return "DENSE_SPACE";
        case RateRegime::DenseTime: return "DENSE_TIME";
        case RateRegime::Sparse: return "SPARSE";
    }
    return "?";
}

namespace {

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

RegimeResult theoretical_exponent(const BesovSpec& besov, double nu) {
    besov.validate();
    if (nu < 0.0) throw std::domain_error("theoretical_exponent: nu must be nonnegative");
    RegimeResult out;
    const double space_bound = besov.s2 * (2.0 * nu + 1.0);
    const double sparse_bound = (2.0 * nu + 1.0) * (1.0 / besov.p - 0.5);
    out.xi1 = nearly_equal(besov.s1, space_bound);
    out.xi2 = nearly_equal(besov.s1, sparse_bound);

    if (besov.s1 >= space_bound || out.xi1) {
        out.regime = RateRegime::DenseSpace;
        out.exponent = 2.0 * besov.s2 / (2.0 * besov.s2 + 1.0);
        out.lower_exponent = out.exponent;
        out.log_power = (out.xi1 ? 1.0 : 0.0) + out.exponent;
    } else if (besov.s1 > sparse_bound && !out.xi2) {
        out.regime = RateRegime::DenseTime;
        out.exponent = 2.0 * besov.s1 / (2.0 * besov.s1 + 2.0 * nu + 1.0);
        out.lower_exponent = out.exponent;
        out.log_power = out.exponent;
    } else {
        out.regime = RateRegime::Sparse;
        const double sp = besov.s1_prime();
        const double ss = besov.s1_star();
        out.exponent = 2.0 * sp / (2.0 * sp + 2.0 * nu);
        out.lower_exponent = 2.0 * ss / (2.0 * ss + 2.0 * nu);
        out.log_power = (out.xi2 ? 1.0 : 0.0) + out.exponent;
    }
    return out;
}

double empirical_risk(const Grid& f_hat, const Grid& f_true) {
    f_hat.require_same_shape(f_true);
    double acc = 0.0;
    for (std::size_t i = 0; i < f_hat.v.size(); ++i) {
        const double d = f_hat.v[i] - f_true.v[i];
        acc += d * d;
    }
    return acc / static_cast<double>(f_hat.v.size());
}

RiskStats monte_carlo_risk(const TestFunction& f, const KernelSpec& kernel, const NoiseSpec& noise,
                           int n, int m, const EstimatorParams& params, int replicates,
                           int threads) {
    if (replicates < 2) throw std::invalid_argument("monte_carlo_risk: needs at least 2 replicates");
    if (static_cast<int>(noise.alphas.size()) != m)
        throw std::invalid_argument("monte_carlo_risk: noise.alphas length must equal M");
    Basis2D basis;

    const Grid f_true = f.sample_grid(n, m);
    const Grid convolved = convolve_truth(f_true, kernel);

    std::vector<double> risks(replicates, 0.0);
    auto run_range = [&](int lo, int hi) {
        for (int rep = lo; rep < hi; ++rep) {
            ObservationGrid y;
            y.data = convolved;
            if (noise.sigma > 0.0) {
                for (int l = 0; l < m; ++l) {
                    auto xi = sample_noise(noise, n, l, static_cast<std::uint64_t>(rep));
                    for (int i = 0; i < n; ++i) y.data.at(i, l) += noise.sigma * xi[i];
                }
            }
            auto res = estimate(y, kernel, params, basis);
            risks[rep] = empirical_risk(res.f_hat, f_true);
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        run_range(0, replicates);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (replicates + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk, hi = std::min(replicates, (t + 1) * chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    RiskStats stats;
    stats.per_replicate = risks;
    for (double r : risks) stats.mean += r;
    stats.mean /= replicates;
    double ss = 0.0;
    for (double r : risks) ss += (r - stats.mean) * (r - stats.mean);
    stats.se = std::sqrt(ss / (replicates - 1) / replicates);
    return stats;
}

FitResult rate_fit(const std::vector<LadderPoint>& ladder) {
    if (ladder.size() < 4) throw std::invalid_argument("rate_fit: needs at least 4 ladder points");
    std::vector<double> x, y;
    for (const auto& pt : ladder) {
        if (!(pt.risk > 0.0)) throw std::invalid_argument("rate_fit: risks must be positive");
        x.push_back(std::log(static_cast<double>(pt.m)) +
                    pt.alpha_star * std::log(static_cast<double>(pt.n)));
        y.push_back(std::log(pt.risk));
    }
    const std::size_t k = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) { mx += x[i]; my += y[i]; }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx < 1e-12) throw std::invalid_argument("rate_fit: degenerate design (equal abscissae)");
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = y[i] - my - slope * (x[i] - mx);
        rss += e * e;
    }
    FitResult out;
    out.slope = -slope;
    out.stderr_ = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
    return out;
}

RateReport run_experiment(const ExperimentPlan& plan, const std::filesystem::path& outdir,
                          int threads) {
    if (plan.ladder.empty()) throw std::invalid_argument("run_experiment: empty ladder");
    const TestFunction fn = find_test_function(plan.function);
    RateReport report;
    report.regime = theoretical_exponent(BesovSpec::from(fn.smoothness), plan.kernel.nu);
    report.log_deflated = plan.log_deflate;

    for (const auto& [m, n] : plan.ladder) {
        NoiseSpec noise;
        noise.sigma = plan.sigma;
        noise.generator = plan.generator;
        noise.seed = plan.seed;
        noise.alphas = plan.alphas.size() == 1 ? std::vector<double>(m, plan.alphas[0]) : plan.alphas;
        if (static_cast<int>(noise.alphas.size()) != m)
            throw std::invalid_argument("run_experiment: alphas must be scalar or match every ladder M");

        EstimatorParams params;
        params.nu = plan.kernel.nu;
        params.sigma = plan.sigma;
        params.alphas = noise.alphas;
        params.rho = plan.rho ? *plan.rho : calibrate_rho(plan.kernel, noise, plan.kernel.nu).rho_min;
        report.rho_used = params.rho;

        auto stats = monte_carlo_risk(fn, plan.kernel, noise, n, m, params, plan.replicates, threads);
        LadderPoint pt;
        pt.m = m;
        pt.n = n;
        pt.alpha_star = params.alpha_star();
        pt.risk = stats.mean;
        pt.se = stats.se;
        report.ladder.push_back(pt);
    }

    // Optionally divide out the [ln(MN)]^power factor of the upper bound before fitting.
    std::vector<LadderPoint> fit_points = report.ladder;
    if (plan.log_deflate) {
        for (auto& pt : fit_points) {
            const double lnmn = std::log(static_cast<double>(pt.m) * static_cast<double>(pt.n));
            pt.risk /= std::pow(lnmn, report.regime.log_power);
        }
    }
    const auto fit = rate_fit(fit_points);
    report.fitted_slope = fit.slope;
    report.slope_stderr = fit.stderr_;

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        {
            CsvWriter csv(outdir / "risks.csv", {"M", "N", "alpha_star", "mean_risk", "se"});
            for (const auto& pt : report.ladder)
                csv.row({std::to_string(pt.m), std::to_string(pt.n), format_double(pt.alpha_star),
                         format_double(pt.risk), format_double(pt.se)});
        }
        {
            CsvWriter csv(outdir / "report.csv",
                          {"regime", "theoretical_exponent", "lower_exponent", "log_power",
                           "fitted_slope", "stderr", "rho", "log_deflated"});
            csv.row({to_string(report.regime.regime), format_double(report.regime.exponent),
                     format_double(report.regime.lower_exponent), format_double(report.regime.log_power),
                     format_double(report.fitted_slope), format_double(report.slope_stderr),
                     format_double(report.rho_used), plan.log_deflate ? "true" : "false"});
        }
        {
            CsvWriter csv(outdir / "plot_risk_vs_mn.csv", {"x", "y"});
            for (const auto& pt : report.ladder) {
                const double mn = static_cast<double>(pt.m) *
                                  std::pow(static_cast<double>(pt.n), pt.alpha_star);
                csv.row({format_double(mn), format_double(pt.risk)});
            }
        }
        {
            CsvWriter csv(outdir / "plot_logfit.csv", {"x", "y"});
            for (const auto& pt : fit_points) {
                const double lx = std::log(static_cast<double>(pt.m)) +
                                  pt.alpha_star * std::log(static_cast<double>(pt.n));
                csv.row({format_double(lx), format_double(std::log(pt.risk))});
            }
        }
    }
    return report;
}

}  // namespace fdec
