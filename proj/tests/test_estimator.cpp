#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fdecon/bench.hpp"
#include "fdecon/estimator.hpp"
#include "fdecon/model.hpp"
#include "oracles.hpp"

using namespace fdec;

namespace {

NoiseSpec make_noise(NoiseGenerator gen, double alpha, int m, double sigma,
                     std::uint64_t seed = 11) {
    NoiseSpec n;
    n.sigma = sigma;
    n.generator = gen;
    n.alphas.assign(m, alpha);
    n.seed = seed;
    return n;
}

EstimatorParams make_params(double nu, double rho, const NoiseSpec& noise) {
    EstimatorParams p;
    p.nu = nu;
    p.rho = rho;
    p.sigma = noise.sigma;
    p.alphas = noise.alphas;
    return p;
}

const KernelSpec kPure1{1.0, KernelFamily::PurePower, false};

}  // namespace

TEST_CASE("dft_profiles") {
    ObservationGrid y;
    y.data = Grid(64, 8);
    for (auto& v : y.data.v) v = 1.0;
    auto t = dft_profiles(y);
    for (int l = 0; l < 8; ++l) {
        CHECK(std::abs(t.at(0, l) - cplx{1.0, 0.0}) < 1e-12);
        for (int m = 1; m < 32; ++m) {
            CHECK(std::abs(t.at(m, l)) < 1e-12);
            CHECK(std::abs(t.at(-m, l)) < 1e-12);
        }
    }

    for (int i = 0; i < 64; ++i)
        for (int l = 0; l < 8; ++l)
            y.data.at(i, l) = std::cos(2 * std::numbers::pi * i / 64.0);
    t = dft_profiles(y);
    CHECK(std::abs(t.at(1, 0) - cplx{0.5, 0.0}) < 1e-12);
    CHECK(std::abs(t.at(-1, 0) - cplx{0.5, 0.0}) < 1e-12);

    // Parseval under the 1/N normalization
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (auto& v : y.data.v) v = gauss(rng);
    t = dft_profiles(y);
    for (int l = 0; l < 8; ++l) {
        double freq = 0, time = 0;
        for (int m = -32; m < 32; ++m) freq += std::norm(t.at(m, l));
        for (int i = 0; i < 64; ++i) time += y.data.at(i, l) * y.data.at(i, l);
        CHECK(freq == doctest::Approx(time / 64.0).epsilon(1e-10));
    }
}

TEST_CASE("beta_tilde recovers a noiseless tensor coefficient") {
    Basis2D basis;
    const int n = 128, m = 16;
    const WaveletIndex target{2, 1, 1, 0};

    CoeffTable table;
    table.j1_levels = 4;
    table.j2_levels = 3;
    table.c.assign(static_cast<std::size_t>(table.n_time_idx()) * table.n_space_idx(), cplx{0, 0});
    table.wavelet(target) = 1.0;
    auto f = synthesize_2d(table, basis, n, m);

    auto y = simulate_from_grid(f, kPure1, make_noise(NoiseGenerator::Iid, 1.0, m, 0.0), 0);
    auto yhat = dft_profiles(y);

    CHECK(std::abs(beta_tilde(yhat, kPure1, target, basis) - cplx{1.0, 0.0}) < 1e-6);
    CHECK(std::abs(beta_tilde(yhat, kPure1, {3, 0, 1, 1}, basis)) < 1e-6);
    CHECK(std::abs(beta_tilde(yhat, kPure1, {2, 1, 2, 3}, basis)) < 1e-6);
}

TEST_CASE("beta_tilde is centered under pure noise") {
    Basis2D basis;
    const int n = 64, m = 16, reps = 10000;
    auto noise = make_noise(NoiseGenerator::Iid, 1.0, m, 1.0);
    ObservationGrid y;
    y.data = Grid(n, m);
    cplx acc{0, 0};
    double acc2 = 0;
    const WaveletIndex w{2, 0, 1, 1};
    for (int rep = 0; rep < reps; ++rep) {
        for (int l = 0; l < m; ++l) {
            auto xi = sample_noise(noise, n, l, rep);
            for (int i = 0; i < n; ++i) y.data.at(i, l) = xi[i];
        }
        const cplx b = beta_tilde(dft_profiles(y), kPure1, w, basis);
        acc += b;
        acc2 += std::norm(b);
    }
    const cplx mean = acc / static_cast<double>(reps);
    const double sd = std::sqrt(acc2 / reps);
    CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("beta_tilde equals the brute-force oracle") {
    Basis2D basis;
    const int n = 64, m = 16;
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    std::uniform_int_distribution<int> pick_j1(0, 3), pick_j2(0, 3);

    for (int trial = 0; trial < 20; ++trial) {
        ObservationGrid y;
        y.data = Grid(n, m);
        for (auto& v : y.data.v) v = gauss(rng);
        const KernelSpec kernel = trial % 2 ? kPure1 : KernelSpec{0.5, KernelFamily::SmoothPower, true};
        auto yhat = dft_profiles(y);
        const int j1 = pick_j1(rng), j2 = pick_j2(rng);
        WaveletIndex w{j1, static_cast<int>(rng() % (1u << j1)), j2,
                       static_cast<int>(rng() % (1u << j2))};
        const cplx got = beta_tilde(yhat, kernel, w, basis);
        const cplx want = oracle::beta_naive(y.data, kernel, w, basis.daub);
        CHECK(std::abs(got - want) < 1e-9);
    }
}

TEST_CASE("estimate table matches beta_tilde") {
    Basis2D basis;
    const int n = 128, m = 16;
    auto noise = make_noise(NoiseGenerator::Fgn, 0.7, m, 0.4);
    auto y = simulate(find_test_function("smooth"), kPure1, noise, n, m, 2);
    auto params = make_params(1.0, 1.0, noise);
    auto table = estimate_coefficients(y, kPure1, params, basis);
    auto yhat = dft_profiles(y);
    for (WaveletIndex w : {WaveletIndex{0, 0, 0, 0}, WaveletIndex{2, 3, 1, 1},
                           WaveletIndex{3, 5, 3, 7}}) {
        CHECK(std::abs(table.wavelet(w) - beta_tilde(yhat, kPure1, w, basis)) < 1e-10);
    }
}

TEST_CASE("threshold formula") {
    auto params = make_params(1.0, 1.0, make_noise(NoiseGenerator::Iid, 1.0, 16, 1.0));
    CHECK(threshold(2, 16, 256, params) == doctest::Approx(0.18022506).epsilon(1e-6));

    // nu = 0 removes the level dependence
    auto p0 = make_params(0.0, 2.0, make_noise(NoiseGenerator::Iid, 1.0, 16, 1.0));
    CHECK(threshold(0, 16, 256, p0) == doctest::Approx(threshold(5, 16, 256, p0)).epsilon(1e-14));

    // doubling M shrinks lambda by sqrt(ln(2MN)/ln(MN))/sqrt(2)
    const double l1 = threshold(3, 16, 256, params);
    const double l2 = threshold(3, 32, 256, params);
    const double want = l1 * std::sqrt(std::log(2.0 * 16 * 256) / std::log(16.0 * 256)) /
                        std::sqrt(2.0);
    CHECK(l2 == doctest::Approx(want).epsilon(1e-12));
    CHECK(l2 < l1);
}

TEST_CASE("resolution levels") {
    auto r = resolution_levels(16, 256, 1.0, 1.0);
    CHECK(r.j1_levels == 4);
    CHECK(!r.j1_capped);
    CHECK(r.j2_levels == 4);
    CHECK(r.j2_capped);

    auto r2 = resolution_levels(16, 256, 0.5, 1.0);
    CHECK(r2.j1_levels == 2);

    auto r3 = resolution_levels(16, 256, 1.0, 50.0);
    CHECK(r3.j1_levels == 0);
}

TEST_CASE("weakest-lm parameter invariance") {
    std::vector<double> alphas = {0.4, 0.4, 0.8, 0.4, 0.4, 0.4, 0.4, 0.4};
    NoiseSpec noise;
    noise.sigma = 1.0;
    noise.generator = NoiseGenerator::Fgn;
    noise.alphas = alphas;
    auto params = make_params(1.0, 1.0, noise);
    const double a_star = params.alpha_star();
    const double lam = threshold(3, 8, 256, params);
    const auto lv = resolution_levels(8, 256, a_star, 1.0);

    std::vector<double> perm = {0.4, 0.8, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4};
    auto params2 = params;
    params2.alphas = perm;
    CHECK(params2.alpha_star() == a_star);
    CHECK(threshold(3, 8, 256, params2) == lam);  // bit-identical
    const auto lv2 = resolution_levels(8, 256, params2.alpha_star(), 1.0);
    CHECK(lv.j1_levels == lv2.j1_levels);
    CHECK(lv.j2_levels == lv2.j2_levels);
}

TEST_CASE("noiseless estimate reproduces the projection") {
    Basis2D basis;
    const int n = 256, m = 16;
    KernelSpec identity{0.0, KernelFamily::PurePower, false};
    auto noise = make_noise(NoiseGenerator::Iid, 1.0, m, 0.0);
    auto params = make_params(0.0, 0.0, noise);

    for (const char* name : {"smooth", "spacerough"}) {
        auto fn = find_test_function(name);
        auto truth = fn.sample_grid(n, m);
        auto y = simulate(fn, identity, noise, n, m, 0);
        auto res = estimate(y, identity, params, basis);
        auto proj = synthesize_2d(
            analyze_2d(truth, basis, res.levels.j1_levels, res.levels.j2_levels), basis, n, m);
        CHECK(empirical_risk(res.f_hat, proj) <= 1e-10);
    }
}

TEST_CASE("thresholding kills pure noise at the calibrated rho") {
    Basis2D basis;
    const int n = 256, m = 16, reps = 100;
    auto noise = make_noise(NoiseGenerator::Iid, 1.0, m, 1.0);
    const auto cal = calibrate_rho(kPure1, noise, 1.0);
    auto params = make_params(1.0, cal.rho_min, noise);

    std::size_t kept = 0, total = 0;
    for (int rep = 0; rep < reps; ++rep) {
        ObservationGrid y;
        y.data = Grid(n, m);
        for (int l = 0; l < m; ++l) {
            auto xi = sample_noise(noise, n, l, rep);
            for (int i = 0; i < n; ++i) y.data.at(i, l) = xi[i];
        }
        auto res = estimate(y, kPure1, params, basis);
        kept += res.kept;
        total += res.total;
    }
    CHECK(static_cast<double>(kept) <= 0.01 * static_cast<double>(total));
}

TEST_CASE("thresholding beats keep-all under noise") {
    Basis2D basis;
    const int n = 512, m = 32, reps = 50;
    auto fn = find_test_function("smooth");
    auto truth = fn.sample_grid(n, m);
    auto conv = convolve_truth(truth, kPure1);
    auto noise = make_noise(NoiseGenerator::Iid, 1.0, m, 0.5);
    auto params = make_params(1.0, 2.0 * noise.sigma, noise);
    auto keepall = params;
    keepall.rho = 0.0;

    double risk_thresh = 0, risk_keep = 0;
    for (int rep = 0; rep < reps; ++rep) {
        ObservationGrid y;
        y.data = conv;
        for (int l = 0; l < m; ++l) {
            auto xi = sample_noise(noise, n, l, rep);
            for (int i = 0; i < n; ++i) y.data.at(i, l) += noise.sigma * xi[i];
        }
        risk_thresh += empirical_risk(estimate(y, kPure1, params, basis).f_hat, truth);
        risk_keep += empirical_risk(estimate(y, kPure1, keepall, basis).f_hat, truth);
    }
    CHECK(risk_thresh < risk_keep);
}

TEST_CASE("hard threshold idempotence") {
    Basis2D basis;
    const int n = 128, m = 16;
    auto noise = make_noise(NoiseGenerator::Fgn, 0.6, m, 0.5);
    auto y = simulate(find_test_function("smooth"), kPure1, noise, n, m, 1);
    auto params = make_params(1.0, 1.0, noise);
    auto res = estimate(y, kPure1, params, basis);

    auto again = res.coeffs;
    const std::size_t kept2 = apply_hard_threshold(again, res.thresholds);
    CHECK(kept2 == res.kept);
    for (std::size_t i = 0; i < again.c.size(); ++i) CHECK(again.c[i] == res.coeffs.c[i]);
}

TEST_CASE("calibrate_rho constants") {
    auto iid = make_noise(NoiseGenerator::Iid, 1.0, 4, 1.0);
    KernelSpec id0{0.0, KernelFamily::PurePower, false};
    auto cal0 = calibrate_rho(id0, iid, 0.0);
    CHECK(cal0.sigma_o_sq == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cal0.rho_min == doctest::Approx(2.0).epsilon(1e-8));

    auto cal1 = calibrate_rho(kPure1, iid, 1.0);
    CHECK(cal1.sigma_o_sq ==
          doctest::Approx(std::pow(8 * std::numbers::pi / 3, 2.0)).epsilon(1e-6));
    CHECK(cal1.rho_min == doctest::Approx(2 * 8 * std::numbers::pi / 3).epsilon(1e-6));

    auto fgn = make_noise(NoiseGenerator::Fgn, 0.4, 4, 1.0);
    auto calf = calibrate_rho(kPure1, fgn, 1.0);
    CHECK(calf.rho_min > cal1.rho_min);
}

TEST_CASE("coefficient variance ratio across N") {
    Basis2D basis;
    const int m = 16, reps = 10000;
    const double alpha = 0.6;
    auto noise = make_noise(NoiseGenerator::Fgn, alpha, m, 1.0);

    auto moments = [&](int n, int j1) {
        const WaveletIndex w{j1, 1, 2, 1};
        double s2 = 0, s4 = 0;
        cplx mean{0, 0};
        std::vector<cplx> vals(reps);
        for (int rep = 0; rep < reps; ++rep) {
            ObservationGrid y;
            y.data = Grid(n, m);
            for (int l = 0; l < m; ++l) {
                auto xi = sample_noise(noise, n, l, rep);
                for (int i = 0; i < n; ++i) y.data.at(i, l) = xi[i];
            }
            vals[rep] = beta_tilde(dft_profiles(y), kPure1, w, basis);
            mean += vals[rep];
        }
        mean /= static_cast<double>(reps);
        for (const auto& v : vals) {
            const double d2 = std::norm(v - mean);
            s2 += d2;
            s4 += d2 * d2;
        }
        return std::pair{s2 / reps, s4 / reps};
    };

    // variance ratio across N at fixed omega: 4^{-alpha} within [0.8, 1.25] factors
    const auto [v512, q512] = moments(512, 4);
    const auto [v2048, q2048] = moments(2048, 4);
    (void)q2048;
    const double ratio = v2048 / v512;
    CHECK(ratio >= std::pow(4.0, -alpha) * 0.8);
    CHECK(ratio <= std::pow(4.0, -alpha) * 1.25);

    // the coefficients are real Gaussian up to rounding, so E|.|^4 = 3 Var^2
    CHECK(q512 / (v512 * v512) == doctest::Approx(3.0).epsilon(0.15));
}
