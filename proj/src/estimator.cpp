#include "fdecon/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fdecon/fft.hpp"

namespace fdec {

double EstimatorParams::alpha_star() const {
    if (alphas.empty()) throw std::invalid_argument("estimator: alphas must be nonempty");
    return *std::max_element(alphas.begin(), alphas.end());
}

void EstimatorParams::validate() const {
    if (nu < 0.0) throw std::invalid_argument("estimator: nu must be nonnegative");
    if (rho < 0.0) throw std::invalid_argument("estimator: rho must be nonnegative");
    if (sigma < 0.0) throw std::invalid_argument("estimator: sigma must be nonnegative");
    for (double a : alphas)
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("estimator: alpha must lie in (0, 1]");
    (void)alpha_star();
}

ResolutionLevels resolution_levels(int m, int n, double alpha_star, double nu) {
    if (m < 8 || n < 8) throw std::invalid_argument("resolution_levels: M, N must be >= 8");
    ResolutionLevels out;
    const double log2_mn = std::log2(static_cast<double>(m)) + alpha_star * std::log2(static_cast<double>(n));
    const int j1_raw = static_cast<int>(std::floor(log2_mn / (2.0 * nu + 1.0)));
    const int j2_raw = static_cast<int>(std::floor(log2_mn));
    const int j1_cap = log2_exact(static_cast<std::size_t>(n)) - 2;
    const int j2_cap = log2_exact(static_cast<std::size_t>(m));
    out.j1_capped = j1_raw > j1_cap;
    out.j2_capped = j2_raw > j2_cap;
    out.j1_levels = std::max(0, std::min(j1_raw, j1_cap));
    out.j2_levels = std::max(0, std::min(j2_raw, j2_cap));
    return out;
}

double threshold(int j1, int m, int n, const EstimatorParams& params) {
    params.validate();
    const double mn = static_cast<double>(m) * std::pow(static_cast<double>(n), params.alpha_star());
    if (!(mn > 1.0)) throw std::domain_error("threshold: M N^{alpha*} must exceed 1");
    return params.rho * std::pow(2.0, params.nu * j1) * std::sqrt(std::log(mn) / mn);
}

DftTable dft_profiles(const ObservationGrid& y) {
    y.validate();
    const int n = y.n_time(), m = y.n_space();
    DftTable out;
    out.n_time = n;
    out.n_space = m;
    out.v.resize(static_cast<std::size_t>(n) * m);
    std::vector<double> col(n);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < n; ++i) col[i] = y.data.at(i, l);
        auto fc = fourier_coeffs(col);
        for (int mi = 0; mi < n; ++mi) out.v[static_cast<std::size_t>(mi) * m + l] = fc[mi];
    }
    return out;
}

namespace {

cplx kernel_value_checked(const KernelSpec& kernel, int mode, double x) {
    const cplx g = kernel_fourier(kernel, mode, x);
    if (std::abs(g) < 1e-300)
        throw std::runtime_error("estimator: kernel coefficient too small to divide by");
    return g;
}

}  // namespace

cplx beta_tilde(const DftTable& yhat, const KernelSpec& kernel, const WaveletIndex& idx,
                const Basis2D& basis) {
    const int m = yhat.n_space;
    const auto eta = daubechies_eval(basis.daub, idx.j2, idx.k2, m);
    const auto sup = meyer_support(basis.meyer, idx.j1);
    cplx acc{0.0, 0.0};
    for (int mode : sup.members) {
        cplx inner{0.0, 0.0};
        for (int l = 0; l < m; ++l) {
            const double x = static_cast<double>(l) / m;
            inner += yhat.at(mode, l) / kernel_value_checked(kernel, mode, x) * eta[l];
        }
        inner /= static_cast<double>(m);
        acc += std::conj(meyer_fourier_coeff(basis.meyer, idx.j1, idx.k1, mode)) * inner;
    }
    return acc;
}

namespace {

// Shared assembly: unthresholded coefficient table of the deconvolved data.
CoeffTable assemble_table(const DftTable& yhat, const KernelSpec& kernel, const Basis2D& basis,
                          int j1_levels, int j2_levels) {
    const int n = yhat.n_time, m = yhat.n_space;

    CoeffTable out;
    out.j1_levels = j1_levels;
    out.j2_levels = j2_levels;
    const int sp = out.n_space_idx();
    out.c.assign(static_cast<std::size_t>(out.n_time_idx()) * sp, cplx{0.0, 0.0});

    const int mode_hi = static_cast<int>((1LL << (j1_levels + 1)) / 3);
    if (mode_hi >= n / 2)
        throw std::invalid_argument("estimator: resolution levels exceed the grid Nyquist range");

    // Deconvolved, spatially transformed modes (packed prefix of length 2^{J2}).
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<std::vector<cplx>> spatial(2 * mode_hi + 1);
    std::vector<cplx> prof(m);
    for (int mode = -mode_hi; mode <= mode_hi; ++mode) {
        for (int l = 0; l < m; ++l) {
            const double x = static_cast<double>(l) / m;
            prof[l] = yhat.at(mode, l) / kernel_value_checked(kernel, mode, x);
        }
        pdwt(std::span<cplx>(prof), basis.daub);
        auto& dst = spatial[mode + mode_hi];
        dst.assign(prof.begin(), prof.begin() + sp);
        for (auto& z : dst) z *= inv_sqrt_m;
    }
    auto spatial_at = [&](int mode) -> const std::vector<cplx>& { return spatial[mode + mode_hi]; };

    // Time-scaling row (level m10).
    {
        const double scale = std::pow(2.0, basis.meyer.coarsest_level);
        const int hi = static_cast<int>(std::floor(2.0 * scale / 3.0));
        for (int k = 0; k < (1 << basis.meyer.coarsest_level); ++k)
            for (int mode = -hi; mode <= hi; ++mode) {
                const cplx w = std::conj(meyer_scaling_fourier_coeff(basis.meyer, k, mode));
                if (w == cplx{0.0, 0.0}) continue;
                const auto& d = spatial_at(mode);
                for (int si = 0; si < sp; ++si) out.at(k, si) += w * d[si];
            }
    }

    // Wavelet rows.
    for (int j1 = basis.meyer.coarsest_level; j1 < j1_levels; ++j1) {
        const auto sup = meyer_support(basis.meyer, j1);
        for (int k1 = 0; k1 < (1 << j1); ++k1) {
            const int ti = (1 << j1) + k1;
            for (int mode : sup.members) {
                const cplx w = std::conj(meyer_fourier_coeff(basis.meyer, j1, k1, mode));
                const auto& d = spatial_at(mode);
                for (int si = 0; si < sp; ++si) out.at(ti, si) += w * d[si];
            }
        }
    }
    return out;
}

}  // namespace

CoeffTable estimate_coefficients(const ObservationGrid& y, const KernelSpec& kernel,
                                 const EstimatorParams& params, const Basis2D& basis) {
    params.validate();
    kernel.validate();
    if (static_cast<int>(params.alphas.size()) != y.n_space())
        throw std::invalid_argument("estimator: alphas length must equal the profile count");
    const auto levels = resolution_levels(y.n_space(), y.n_time(), params.alpha_star(), params.nu);
    return assemble_table(dft_profiles(y), kernel, basis, levels.j1_levels, levels.j2_levels);
}

std::size_t apply_hard_threshold(CoeffTable& coeffs, const std::vector<double>& thresholds) {
    std::size_t kept = 0;
    for (int j1 = 0; j1 < coeffs.j1_levels; ++j1) {
        const double lam = thresholds.at(j1);
        for (int k1 = 0; k1 < (1 << j1); ++k1) {
            const int ti = (1 << j1) + k1;
            for (int si = 0; si < coeffs.n_space_idx(); ++si) {
                cplx& z = coeffs.at(ti, si);
                if (std::abs(z) > lam) ++kept;      // strict inequality, ties discarded
                else z = cplx{0.0, 0.0};
            }
        }
    }
    return kept;
}

EstimateResult estimate(const ObservationGrid& y, const KernelSpec& kernel,
                        const EstimatorParams& params, const Basis2D& basis) {
    params.validate();
    kernel.validate();
    if (static_cast<int>(params.alphas.size()) != y.n_space())
        throw std::invalid_argument("estimator: alphas length must equal the profile count");

    EstimateResult res;
    res.levels = resolution_levels(y.n_space(), y.n_time(), params.alpha_star(), params.nu);
    res.coeffs = assemble_table(dft_profiles(y), kernel, basis,
                                res.levels.j1_levels, res.levels.j2_levels);

    res.thresholds.resize(std::max(res.levels.j1_levels, 1), 0.0);
    for (int j1 = 0; j1 < res.levels.j1_levels; ++j1)
        res.thresholds[j1] = threshold(j1, y.n_space(), y.n_time(), params);

    res.kept = apply_hard_threshold(res.coeffs, res.thresholds);
    res.total = static_cast<std::size_t>(res.coeffs.n_time_idx() - 1) * res.coeffs.n_space_idx();
    res.f_hat = synthesize_2d(res.coeffs, basis, y.n_time(), y.n_space());
    return res;
}

ThresholdCalibration calibrate_rho(const KernelSpec& kernel, const NoiseSpec& noise, double nu) {
    kernel.validate();
    noise.validate();
    ThresholdCalibration cal;

    const std::vector<int> ladder = {64, 128, 256, 512, 1024};
    cal.c2_hat = 0.0;
    // distinct alphas share certificates
    std::vector<double> seen;
    for (int l = 0; l < static_cast<int>(noise.alphas.size()); ++l) {
        if (std::find(seen.begin(), seen.end(), noise.alphas[l]) != seen.end()) continue;
        seen.push_back(noise.alphas[l]);
        for (const auto& cert : certify_a1(noise, l, ladder))
            cal.c2_hat = std::max(cal.c2_hat, cert.c2_hat);
    }

    cal.k1_hat = certify_kernel(kernel, 2048, 64).k1_hat;
    cal.sigma_o_sq = cal.c2_hat * noise.sigma * noise.sigma / cal.k1_hat *
                     std::pow(8.0 * std::numbers::pi / 3.0, 2.0 * nu);
    cal.rho_min = 2.0 * std::sqrt(cal.sigma_o_sq);
    return cal;
}

}  // namespace fdec
