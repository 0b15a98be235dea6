#include "fdecon/transform2d.hpp"

#include <cmath>
#include <stdexcept>

namespace fdec {

double CoeffTable::energy() const {
    double e = 0.0;
    for (const auto& z : c) e += std::norm(z);
    return e;
}

int max_time_levels(int n) {
    // level j uses |m| <= floor(2^{j+2}/3); count how many levels stay under Nyquist
    int lvl = 0;
    while (((1LL << (lvl + 2)) / 3) < n / 2) ++lvl;
    return lvl;
}

namespace {

void check_grid_args(int n, int m, const Basis2D& basis, int j1_levels, int j2_levels) {
    if (!is_pow2(static_cast<std::size_t>(n)) || !is_pow2(static_cast<std::size_t>(m)))
        throw std::invalid_argument("transform2d: grid sides must be powers of two");
    if (j1_levels < basis.meyer.coarsest_level || j1_levels > max_time_levels(n))
        throw std::invalid_argument("transform2d: J1 outside the grid-imposed range");
    if (j2_levels < basis.daub.coarsest_level || j2_levels > log2_exact(static_cast<std::size_t>(m)))
        throw std::invalid_argument("transform2d: J2 outside the grid-imposed range");
}

// Signed modes carrying time-scaling content at level m10 (window support).
std::vector<int> scaling_modes(const MeyerBasisSpec& spec) {
    const double scale = std::pow(2.0, spec.coarsest_level);
    const int hi = static_cast<int>(std::floor(2.0 * scale / 3.0));
    std::vector<int> out;
    for (int m = -hi; m <= hi; ++m) out.push_back(m);
    return out;
}

}  // namespace

CoeffTable analyze_2d(const Grid& f, const Basis2D& basis, int j1_levels, int j2_levels) {
    const int n = f.n_time, m = f.n_space;
    check_grid_args(n, m, basis, j1_levels, j2_levels);

    CoeffTable out;
    out.j1_levels = j1_levels;
    out.j2_levels = j2_levels;
    const int sp = out.n_space_idx();
    out.c.assign(static_cast<std::size_t>(out.n_time_idx()) * sp, cplx{0.0, 0.0});

    // Fourier coefficients per profile, mode-major.
    std::vector<cplx> modes(static_cast<std::size_t>(n) * m);
    {
        std::vector<double> col(n);
        for (int l = 0; l < m; ++l) {
            for (int i = 0; i < n; ++i) col[i] = f.at(i, l);
            auto fc = fourier_coeffs(col);
            for (int mi = 0; mi < n; ++mi) modes[static_cast<std::size_t>(mi) * m + l] = fc[mi];
        }
    }

    // Spatial transform of each needed mode; keep the packed prefix of length 2^{J2}.
    const int mode_hi = static_cast<int>((1LL << (j1_levels + 1)) / 3);
    auto spatial_of_mode = [&](int mode) {
        std::vector<cplx> v(modes.begin() + static_cast<std::size_t>((mode % n + n) % n) * m,
                            modes.begin() + static_cast<std::size_t>((mode % n + n) % n) * m + m);
        pdwt(std::span<cplx>(v), basis.daub);
        const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
        v.resize(sp);
        for (auto& z : v) z *= inv_sqrt_m;
        return v;
    };
    std::vector<std::vector<cplx>> spatial(2 * mode_hi + 1);
    for (int mode = -mode_hi; mode <= mode_hi; ++mode) spatial[mode + mode_hi] = spatial_of_mode(mode);
    auto spatial_at = [&](int mode) -> const std::vector<cplx>& { return spatial[mode + mode_hi]; };

    // Time scaling row.
    for (int mode : scaling_modes(basis.meyer)) {
        for (int k = 0; k < (1 << basis.meyer.coarsest_level); ++k) {
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

Grid synthesize_2d(const CoeffTable& coeffs, const Basis2D& basis, int n, int m) {
    check_grid_args(n, m, basis, coeffs.j1_levels, coeffs.j2_levels);
    const int sp = coeffs.n_space_idx();

    // Accumulate spatial coefficient vectors per Fourier mode.
    std::vector<std::vector<cplx>> acc(n);
    auto add_mode = [&](int mode, cplx w, int ti) {
        if (w == cplx{0.0, 0.0}) return;
        auto& a = acc[(mode % n + n) % n];
        if (a.empty()) a.assign(sp, cplx{0.0, 0.0});
        for (int si = 0; si < sp; ++si) a[si] += w * coeffs.at(ti, si);
    };

    for (int mode : scaling_modes(basis.meyer))
        for (int k = 0; k < (1 << basis.meyer.coarsest_level); ++k)
            add_mode(mode, meyer_scaling_fourier_coeff(basis.meyer, k, mode), k);

    for (int j1 = basis.meyer.coarsest_level; j1 < coeffs.j1_levels; ++j1) {
        const auto sup = meyer_support(basis.meyer, j1);
        for (int k1 = 0; k1 < (1 << j1); ++k1)
            for (int mode : sup.members)
                add_mode(mode, meyer_fourier_coeff(basis.meyer, j1, k1, mode), (1 << j1) + k1);
    }

    // Inverse spatial transform per mode, then inverse Fourier per profile.
    const double sqrt_m = std::sqrt(static_cast<double>(m));
    std::vector<cplx> spectrum(static_cast<std::size_t>(n) * m, cplx{0.0, 0.0});
    std::vector<cplx> prof(m);
    for (int mi = 0; mi < n; ++mi) {
        if (acc[mi].empty()) continue;
        std::fill(prof.begin(), prof.end(), cplx{0.0, 0.0});
        std::copy(acc[mi].begin(), acc[mi].end(), prof.begin());
        ipdwt(std::span<cplx>(prof), basis.daub);
        for (int l = 0; l < m; ++l) spectrum[static_cast<std::size_t>(mi) * m + l] = sqrt_m * prof[l];
    }

    Grid out(n, m);
    double im_energy = 0.0, re_energy = 0.0;
    std::vector<cplx> col(n);
    for (int l = 0; l < m; ++l) {
        for (int mi = 0; mi < n; ++mi) col[mi] = spectrum[static_cast<std::size_t>(mi) * m + l];
        auto vals = fourier_synthesis(col);
        for (int i = 0; i < n; ++i) {
            out.at(i, l) = vals[i].real();
            re_energy += vals[i].real() * vals[i].real();
            im_energy += vals[i].imag() * vals[i].imag();
        }
    }
    if (im_energy > 1e-6 * std::max(re_energy, 1e-300))
        throw std::runtime_error("synthesize_2d: imaginary residual exceeds tolerance");
    return out;
}

}  // namespace fdec
