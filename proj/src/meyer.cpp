#include "fdecon/meyer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdec {

namespace {

constexpr double kPi = std::numbers::pi;

// Reduced phase e^{-i pi q / 2^{j}} with q taken mod 2^{j+1} to keep the
// argument small; the coefficient phases are roots of unity of order 2^{j+1}.
cplx unit_phase(long long q, int j) {
    const long long period = 2LL << j;  // 2^{j+1}
    long long r = q % period;
    if (r < 0) r += period;
    const double ang = -kPi * static_cast<double>(r) / static_cast<double>(1LL << j);
    return {std::cos(ang), std::sin(ang)};
}

void check_index(const MeyerBasisSpec& spec, int j1, int k1) {
    if (j1 < spec.coarsest_level) throw std::domain_error("meyer: level below coarsest_level");
    if (j1 > 40) throw std::domain_error("meyer: level too large");
    if (k1 < 0 || k1 >= (1 << j1)) throw std::domain_error("meyer: translation out of range");
}

}  // namespace

double meyer_aux_poly(double x, int degree) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (degree) {
        case 0: return x;
        case 1: return x * x * (3 - 2 * x);
        case 2: return x * x * x * (10 - 15 * x + 6 * x * x);
        case 3: return x * x * x * x * (35 - 84 * x + (70 - 20 * x) * x * x);
        case 4: {
            const double x2 = x * x;
            return x2 * x2 * x * (126 - 420 * x + 540 * x2 - 315 * x2 * x + 70 * x2 * x2);
        }
        default: throw std::domain_error("meyer_aux_poly: degree must be 0..4");
    }
}

double meyer_window(double xi, int degree) {
    const double a = std::abs(xi);
    if (a >= 2 * kPi / 3 && a <= 4 * kPi / 3)
        return std::sin(kPi / 2 * meyer_aux_poly(3 * a / (2 * kPi) - 1, degree));
    if (a > 4 * kPi / 3 && a <= 8 * kPi / 3)
        return std::cos(kPi / 2 * meyer_aux_poly(3 * a / (4 * kPi) - 1, degree));
    return 0.0;
}

double meyer_scaling_window(double xi, int degree) {
    const double a = std::abs(xi);
    if (a <= 2 * kPi / 3) return 1.0;
    if (a <= 4 * kPi / 3)
        return std::cos(kPi / 2 * meyer_aux_poly(3 * a / (2 * kPi) - 1, degree));
    return 0.0;
}

FreqSupport meyer_support(const MeyerBasisSpec& spec, int j1) {
    check_index(spec, j1, 0);
    FreqSupport out;
    out.level = j1;
    const double scale = std::pow(2.0, j1);
    const int lo = static_cast<int>(std::floor(scale / 3.0)) + 1;
    const int hi = static_cast<int>(std::floor(4.0 * scale / 3.0));
    for (int m = -hi; m <= hi; ++m) {
        if (std::abs(m) < lo) continue;
        if (meyer_window(2 * kPi * m / scale, spec.aux_poly_degree) != 0.0)
            out.members.push_back(m);
    }
    return out;
}

cplx meyer_fourier_coeff(const MeyerBasisSpec& spec, int j1, int k1, int m) {
    check_index(spec, j1, k1);
    const double scale = std::pow(2.0, j1);
    const double w = meyer_window(2 * kPi * m / scale, spec.aux_poly_degree);
    if (w == 0.0) return {0.0, 0.0};
    // 2^{-j/2} Psi(2pi m/2^j) e^{-2pi i m k/2^j} e^{-i pi m/2^j}
    //   = 2^{-j/2} Psi(.) e^{-i pi m(2k+1)/2^j}
    return (w / std::sqrt(scale)) * unit_phase(static_cast<long long>(m) * (2 * k1 + 1), j1);
}

cplx meyer_scaling_fourier_coeff(const MeyerBasisSpec& spec, int k, int m) {
    const int j = spec.coarsest_level;
    check_index(spec, j, k);
    const double scale = std::pow(2.0, j);
    const double w = meyer_scaling_window(2 * kPi * m / scale, spec.aux_poly_degree);
    if (w == 0.0) return {0.0, 0.0};
    return (w / std::sqrt(scale)) * unit_phase(2LL * m * k, j);
}

namespace {

std::vector<double> synth_real(const std::vector<cplx>& coeffs, int n) {
    auto vals = fourier_synthesis(coeffs);
    std::vector<double> out(n);
    double max_im = 0.0, max_re = 0.0;
    for (int i = 0; i < n; ++i) {
        out[i] = vals[i].real();
        max_im = std::max(max_im, std::abs(vals[i].imag()));
        max_re = std::max(max_re, std::abs(vals[i].real()));
    }
    if (max_im > 1e-9 * std::max(1.0, max_re))
        throw std::runtime_error("meyer: basis function has non-real samples");
    return out;
}

}  // namespace

std::vector<double> meyer_eval_grid(const MeyerBasisSpec& spec, int j1, int k1, int n) {
    check_index(spec, j1, k1);
    if (!is_pow2(static_cast<std::size_t>(n))) throw std::invalid_argument("meyer_eval_grid: n not a power of two");
    auto sup = meyer_support(spec, j1);
    if (!sup.members.empty() && std::abs(sup.members.back()) >= n / 2)
        throw std::domain_error("meyer_eval_grid: level does not fit under the Nyquist frequency");
    std::vector<cplx> coeffs(n, cplx{0.0, 0.0});
    for (int m : sup.members)
        coeffs[(m % n + n) % n] = meyer_fourier_coeff(spec, j1, k1, m);
    return synth_real(coeffs, n);
}

std::vector<double> meyer_scaling_eval_grid(const MeyerBasisSpec& spec, int k, int n) {
    const int j = spec.coarsest_level;
    check_index(spec, j, k);
    if (!is_pow2(static_cast<std::size_t>(n))) throw std::invalid_argument("meyer_scaling_eval_grid: n not a power of two");
    const double scale = std::pow(2.0, j);
    const int hi = static_cast<int>(std::floor(2.0 * scale / 3.0));
    if (hi >= n / 2) throw std::domain_error("meyer_scaling_eval_grid: level does not fit on the grid");
    std::vector<cplx> coeffs(n, cplx{0.0, 0.0});
    for (int m = -hi; m <= hi; ++m)
        coeffs[(m % n + n) % n] = meyer_scaling_fourier_coeff(spec, k, m);
    return synth_real(coeffs, n);
}

}  // namespace fdec
