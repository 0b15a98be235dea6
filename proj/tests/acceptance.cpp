// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Criteria 3 and 4 contain subchecks that are mathematically
// unattainable for stationary long-memory noise; they are implemented exactly
// as stated, fail honestly, and the printed detail explains the measurement.
// The full analysis lives in the project notes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fdecon/bench.hpp"
#include "fdecon/csvio.hpp"
#include "fdecon/estimator.hpp"
#include "fdecon/model.hpp"
#include "oracles.hpp"

using namespace fdec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    std::ostringstream os;
    bool pass = true;

    template <class... Ts>
    void require(bool ok, Ts&&... parts) {
        (os << ... << parts);
        os << (ok ? " [ok]; " : " [FAILED]; ");
        pass = pass && ok;
    }
    Outcome done() { return {pass, os.str()}; }
};

NoiseSpec make_noise(NoiseGenerator gen, std::vector<double> alphas, double sigma,
                     std::uint64_t seed) {
    NoiseSpec n;
    n.sigma = sigma;
    n.generator = gen;
    n.alphas = std::move(alphas);
    n.seed = seed;
    return n;
}

EstimatorParams make_params(const NoiseSpec& noise, double nu, double rho) {
    EstimatorParams p;
    p.nu = nu;
    p.rho = rho;
    p.sigma = noise.sigma;
    p.alphas = noise.alphas;
    return p;
}

double sup_gram_error(const std::vector<std::vector<double>>& fns) {
    double worst = 0;
    for (std::size_t a = 0; a < fns.size(); ++a)
        for (std::size_t b = a; b < fns.size(); ++b) {
            double dot = 0;
            for (std::size_t i = 0; i < fns[a].size(); ++i) dot += fns[a][i] * fns[b][i];
            dot /= static_cast<double>(fns[a].size());
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

// ---------------------------------------------------------------------------
// 1. basis correctness
Outcome criterion1() {
    Check c;
    const MeyerBasisSpec meyer{};
    const int n = 256;

    std::vector<std::vector<double>> fns;
    fns.push_back(meyer_scaling_eval_grid(meyer, 0, n));
    for (int j = 0; j <= 6; ++j)
        for (int k = 0; k < (1 << j); ++k) fns.push_back(meyer_eval_grid(meyer, j, k, n));
    const double meyer_err = sup_gram_error(fns);
    c.require(meyer_err <= 1e-8, "meyer gram sup error ", meyer_err);

    const auto daub = DaubBasisSpec::daubechies(8);
    std::vector<std::vector<double>> dfns;
    dfns.push_back(daubechies_scaling_eval(daub, 0, n));
    for (int j = 0; j <= 6; ++j)
        for (int k = 0; k < (1 << j); ++k) dfns.push_back(daubechies_eval(daub, j, k, n));
    const double daub_err = sup_gram_error(dfns);
    c.require(daub_err <= 1e-8, "daubechies gram sup error ", daub_err);

    bool bound_ok = true;
    double worst_excess = 0;
    for (int j = 0; j <= 8 && bound_ok; ++j) {
        const double bound = std::pow(2.0, -j / 2.0) * (1.0 + 1e-14);
        for (int k = 0; k < (1 << j); ++k)
            for (int m = -(1 << (j + 3)); m <= (1 << (j + 3)); ++m) {
                const double a = std::abs(meyer_fourier_coeff(meyer, j, k, m));
                worst_excess = std::max(worst_excess, a - bound);
                if (a > bound) bound_ok = false;
            }
    }
    c.require(bound_ok, "coefficient bound 2^{-j/2}, exhaustive j<=8, worst excess ",
              worst_excess);
    return c.done();
}

// 2. noiseless exactness
Outcome criterion2() {
    Check c;
    Basis2D basis;
    const int n = 256, m = 16;
    const KernelSpec identity{0.0, KernelFamily::PurePower, false};
    const auto noise = make_noise(NoiseGenerator::Iid, std::vector<double>(m, 1.0), 0.0, 0);
    const auto params = make_params(noise, 0.0, 0.0);

    for (const auto& fn : builtin_test_functions()) {
        const auto truth = fn.sample_grid(n, m);
        const auto y = simulate(fn, identity, noise, n, m, 0);
        const auto res = estimate(y, identity, params, basis);
        const auto proj = synthesize_2d(
            analyze_2d(truth, basis, res.levels.j1_levels, res.levels.j2_levels), basis, n, m);
        const double risk = empirical_risk(res.f_hat, proj);
        c.require(risk <= 1e-10, fn.name, " projection risk ", risk);
    }
    return c.done();
}

// 3. Assumption A.1 certification
Outcome criterion3() {
    Check c;
    const std::vector<int> ladder = {64, 128, 256, 512, 1024, 2048, 4096};
    for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
        const auto noise = make_noise(NoiseGenerator::Fgn, {alpha}, 1.0, 0);
        const auto certs = certify_a1(noise, 0, ladder);

        double q_lo = 1e300, q_hi = 0;
        for (const auto& cert : certs) {
            const double q = cert.c2_hat / cert.c1_hat;
            q_lo = std::min(q_lo, q);
            q_hi = std::max(q_hi, q);
        }
        c.require(q_hi / q_lo <= 10.0, "alpha=", alpha, " c2/c1 ladder variation ", q_hi / q_lo,
                  " (limit theory: 64^{1-alpha} = ", std::pow(64.0, 1 - alpha),
                  " since lambda_min stays O(1))");

        const double ratio = certs[6].lambda_max / certs[5].lambda_max;  // 4096 vs 2048
        const double want = std::pow(2.0, 1.0 - alpha);
        c.require(std::abs(ratio / want - 1.0) <= 0.10, "alpha=", alpha,
                  " lambda_max doubling ratio ", ratio, " vs 2^{1-alpha}=", want);
    }
    return c.done();
}

// shared Monte Carlo machinery for criteria 4 and 5
std::vector<cplx> coefficient_samples(const NoiseSpec& noise, const KernelSpec& kernel, int n,
                                      int m, const WaveletIndex& w, int reps, int threads) {
    Basis2D basis;
    std::vector<cplx> out(reps);
    auto worker = [&](int lo, int hi) {
        for (int rep = lo; rep < hi; ++rep) {
            ObservationGrid y;
            y.data = Grid(n, m);
            for (int l = 0; l < m; ++l) {
                auto xi = sample_noise(noise, n, l, static_cast<std::uint64_t>(rep));
                for (int i = 0; i < n; ++i) y.data.at(i, l) = xi[i];
            }
            out[rep] = beta_tilde(dft_profiles(y), kernel, w, basis);
        }
    };
    std::vector<std::thread> pool;
    const int chunk = (reps + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk, hi = std::min(reps, (t + 1) * chunk);
        if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
    return out;
}

double variance_of(const std::vector<cplx>& vals) {
    cplx mean{0, 0};
    for (const auto& v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double s = 0;
    for (const auto& v : vals) s += std::norm(v - mean);
    return s / static_cast<double>(vals.size());
}

// 4. Lemma-1 variance scaling
Outcome criterion4() {
    Check c;
    const double nu = 1.0, alpha = 0.6;
    const int m = 16, reps = 10000, threads = 4;
    const KernelSpec kernel{nu, KernelFamily::PurePower, false};
    const auto noise = make_noise(NoiseGenerator::Fgn, std::vector<double>(m, alpha), 1.0, 0);

    // slope in log2 N at fixed omega
    std::vector<double> lv;
    for (int n : {512, 1024, 2048})
        lv.push_back(std::log2(
            variance_of(coefficient_samples(noise, kernel, n, m, {4, 1, 2, 1}, reps, threads))));
    const double n_slope = (lv[2] - lv[0]) / 2.0;
    c.require(std::abs(n_slope + alpha) <= 0.1, "variance slope in log2 N = ", n_slope,
              " vs -alpha = ", -alpha);

    // slope in j1 at fixed N
    std::vector<double> jv;
    for (int j1 : {3, 4, 5})
        jv.push_back(std::log2(variance_of(
            coefficient_samples(noise, kernel, 2048, m, {j1, 1, 2, 1}, reps, threads))));
    const double j_slope = (jv[2] - jv[0]) / 2.0;
    c.require(std::abs(j_slope - 2.0 * nu) <= 0.15 * 2.0 * nu,
              "variance slope in j1 = ", j_slope, " vs 2 nu = ", 2.0 * nu,
              " (stationary LRD noise gives 2 nu + alpha - 1 = ", 2.0 * nu + alpha - 1.0, ")");
    return c.done();
}

// 5. Lemma-2 tail control
Outcome criterion5() {
    Check c;
    const int n = 256, m = 16, reps = 100000, threads = 4;
    const double nu = 1.0;
    const KernelSpec kernel{nu, KernelFamily::PurePower, false};
    const auto noise = make_noise(NoiseGenerator::Iid, std::vector<double>(m, 1.0), 1.0, 0);

    const auto cal = calibrate_rho(kernel, noise, nu);
    const auto params = make_params(noise, nu, cal.rho_min);
    const auto levels = resolution_levels(m, n, 1.0, nu);
    const int finest = levels.j1_levels - 1;
    const double lam = threshold(finest, m, n, params);

    const auto vals =
        coefficient_samples(noise, kernel, n, m, {finest, 2, 1, 0}, reps, threads);
    long exceed = 0;
    for (const auto& v : vals)
        if (std::abs(v) > lam) ++exceed;
    const double freq = static_cast<double>(exceed) / reps;
    const double bound = 5.0 / (static_cast<double>(m) * n);
    c.require(freq <= bound, "rho_min=", cal.rho_min, ", finest level ", finest, ", Pr(|err|>",
              lam, ") = ", freq, " vs 5/(MN) = ", bound);
    return c.done();
}

// 6. rate reproduction in the DENSE_TIME regime
Outcome criterion6() {
    Check c;
    ExperimentPlan plan;
    plan.function = "timedense";  // dense s1 = 2 structure in time
    plan.kernel = {1.0, KernelFamily::PurePower, false};
    plan.generator = NoiseGenerator::Iid;
    plan.alphas = {1.0};
    plan.sigma = 0.5;
    plan.replicates = 50;
    plan.rho = 0.45;
    plan.log_deflate = true;
    plan.seed = 2026;
    plan.ladder = {{8, 128}, {16, 256}, {32, 512}, {32, 1024}, {64, 2048}};

    const auto report = run_experiment(plan, {}, 4);
    const double want = report.regime.exponent;  // 2 s1/(2 s1 + 2 nu + 1) = 4/7
    c.require(report.regime.regime == RateRegime::DenseTime, "regime ",
              to_string(report.regime.regime));
    c.require(std::abs(want - 4.0 / 7.0) < 1e-12, "theoretical exponent ", want);
    c.require(std::abs(report.fitted_slope - want) <= 0.15 * want, "log-deflated fitted slope ",
              report.fitted_slope, " vs ", want, " +-15%");

    std::ostringstream ladder_txt;
    for (const auto& pt : report.ladder)
        ladder_txt << " (" << pt.m << "," << pt.n << "):" << pt.risk;
    c.os << "ladder" << ladder_txt.str() << "; ";
    return c.done();
}

// 7. long-memory deterioration
Outcome criterion7() {
    Check c;
    const int m = 32, n = 1024, reps = 50;
    const KernelSpec kernel{1.0, KernelFamily::PurePower, false};
    const auto fn = find_test_function("timedense");

    double prev_mean = -1, prev_se = 0;
    for (double alpha : {1.0, 0.6, 0.3}) {
        const auto noise =
            make_noise(NoiseGenerator::Fgn, std::vector<double>(m, alpha), 0.5, 314);
        const auto params = make_params(noise, 1.0, 0.5);
        const auto stats = monte_carlo_risk(fn, kernel, noise, n, m, params, reps, 4);
        if (prev_mean >= 0) {
            const double gap = stats.mean - prev_mean;
            const double cse = std::hypot(stats.se, prev_se);
            c.require(gap > 2.0 * cse, "risk gap at alpha=", alpha, " is ", gap, " vs 2 se = ",
                      2.0 * cse);
        } else {
            c.os << "risk(alpha=1.0) = " << stats.mean << "; ";
        }
        prev_mean = stats.mean;
        prev_se = stats.se;
    }
    return c.done();
}

// 8. weakest-LM dominance
Outcome criterion8() {
    Check c;
    const KernelSpec kernel{1.0, KernelFamily::PurePower, false};
    const auto fn = find_test_function("timedense");

    // exact parameter equality between the mixed profile and homogeneous alpha*
    {
        const int m = 16, n = 256;
        std::vector<double> mixed(m, 0.4);
        mixed[m - 1] = 0.8;
        const auto pm = make_params(make_noise(NoiseGenerator::Fgn, mixed, 0.5, 1), 1.0, 4.0);
        const auto ph = make_params(
            make_noise(NoiseGenerator::Fgn, std::vector<double>(m, 0.8), 0.5, 1), 1.0, 4.0);
        bool same = pm.alpha_star() == ph.alpha_star();
        const auto lm = resolution_levels(m, n, pm.alpha_star(), 1.0);
        const auto lh = resolution_levels(m, n, ph.alpha_star(), 1.0);
        same = same && lm.j1_levels == lh.j1_levels && lm.j2_levels == lh.j2_levels;
        for (int j1 = 0; j1 < lm.j1_levels; ++j1)
            same = same && threshold(j1, m, n, pm) == threshold(j1, m, n, ph);
        c.require(same, "thresholds and levels identical to the homogeneous alpha*=0.8 run");
    }

    const std::vector<std::pair<int, int>> ladder = {{16, 128}, {16, 256}, {32, 512}};
    for (const auto& [m, n] : ladder) {
        std::vector<double> mixed(m, 0.4);
        mixed[m - 1] = 0.8;
        const auto noise_mixed = make_noise(NoiseGenerator::Fgn, mixed, 0.5, 471);
        const auto noise_homog =
            make_noise(NoiseGenerator::Fgn, std::vector<double>(m, 0.8), 0.5, 522);
        const auto sm = monte_carlo_risk(fn, kernel, noise_mixed, n, m,
                                         make_params(noise_mixed, 1.0, 4.0), 50, 4);
        const auto sh = monte_carlo_risk(fn, kernel, noise_homog, n, m,
                                         make_params(noise_homog, 1.0, 4.0), 50, 4);
        const double ratio = sm.mean / sh.mean;
        c.require(ratio >= 0.5 && ratio <= 2.0, "M=", m, " N=", n, " risk ratio ", ratio);
    }
    return c.done();
}

// 9. regime oracle golden table through the CLI
Outcome criterion9() {
    Check c;
    const fs::path dir = fs::temp_directory_path() / "fdecon_acceptance_rates";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "rates.cfg");
        os << "[rates]\n"
              "case = 2 1 2 1\n"    // DENSE_TIME 4/7
              "case = 4 1 2 1\n"    // DENSE_SPACE 2/3
              "case = 1 1 1 1\n"    // SPARSE 1/3
              "case = 3 1 2 1\n"    // boundary: xi1
              "case = 1.5 2 1 1\n"; // boundary: xi2
    }
    const std::string cmd = std::string(FDECON_BIN) + " rates --config " +
                            (dir / "rates.cfg").string() + " --out " + dir.string() +
                            " --force >/dev/null 2>&1";
    c.require(std::system(cmd.c_str()) == 0, "cmd_rates exit code");

    const auto rows = read_csv(dir / "rates.csv");
    if (rows.size() != 6) {
        c.require(false, "rates.csv row count ", rows.size());
        return c.done();
    }
    auto row_ok = [&](int r, const std::string& regime, double exponent, const std::string& xi1,
                      const std::string& xi2) {
        const bool ok = rows[r][4] == regime && std::stod(rows[r][5]) == exponent &&
                        rows[r][8] == xi1 && rows[r][9] == xi2;
        c.require(ok, "row ", r, " = ", rows[r][4], "/", rows[r][5], "/xi", rows[r][8],
                  rows[r][9], " want ", regime, "/", exponent);
    };
    row_ok(1, "DENSE_TIME", 4.0 / 7.0, "0", "0");
    row_ok(2, "DENSE_SPACE", 2.0 / 3.0, "0", "0");
    row_ok(3, "SPARSE", 1.0 / 3.0, "0", "0");
    row_ok(4, "DENSE_SPACE", 2.0 / 3.0, "1", "0");  // s1 = s2(2nu+1): xi1 set
    row_ok(5, "SPARSE", 1.0 / 2.0, "0", "1");       // s1 = (2nu+1)(1/p-1/2): xi2 set
    fs::remove_all(dir);
    return c.done();
}

// 10. oracle equivalence for the coefficient estimator
Outcome criterion10() {
    Check c;
    Basis2D basis;
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> gauss;
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 64 << (trial % 2), m = 16;
        ObservationGrid y;
        y.data = Grid(n, m);
        for (auto& v : y.data.v) v = gauss(rng);

        KernelSpec kernel;
        switch (trial % 3) {
            case 0: kernel = {1.0, KernelFamily::PurePower, false}; break;
            case 1: kernel = {0.5, KernelFamily::SmoothPower, true}; break;
            default: kernel = {2.0, KernelFamily::PurePower, false}; break;
        }
        const int j1 = static_cast<int>(rng() % 4), j2 = static_cast<int>(rng() % 4);
        const WaveletIndex w{j1, static_cast<int>(rng() % (1u << j1)), j2,
                             static_cast<int>(rng() % (1u << j2))};
        const cplx got = beta_tilde(dft_profiles(y), kernel, w, basis);
        const cplx want = oracle::beta_naive(y.data, kernel, w, basis.daub);
        worst = std::max(worst, std::abs(got - want));
    }
    c.require(worst <= 1e-9, "200 random instances, worst |difference| = ", worst);
    return c.done();
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = unconstrained
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const std::vector<Criterion> criteria = {
        {1, "basis correctness", 30, criterion1},
        {2, "noiseless exactness", 10, criterion2},
        {3, "assumption A.1 certification", 120, criterion3},
        {4, "coefficient variance scaling", 300, criterion4},
        {5, "large-deviation tail control", 300, criterion5},
        {6, "DENSE_TIME rate reproduction", 1800, criterion6},
        {7, "long-memory risk deterioration", 0, criterion7},
        {8, "weakest-LM dominance", 0, criterion8},
        {9, "regime oracle golden table", 0, criterion9},
        {10, "coefficient oracle equivalence", 0, criterion10},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        if (only != 0 && crit.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = crit.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = crit.budget_seconds == 0 || secs <= crit.budget_seconds;
        const bool pass = out.pass && in_budget;
        std::printf("[%s] criterion %d: %s (%.1fs%s) %s\n", pass ? "PASS" : "FAIL", crit.id,
                    crit.name, secs, in_budget ? "" : ", OVER BUDGET", out.detail.c_str());
        if (!pass) ++failures;
    }
    return failures;
}
