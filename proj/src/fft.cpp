#include "fdecon/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdec {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
    if (!is_pow2(n)) throw std::invalid_argument("size is not a power of two");
    int p = 0;
    while ((std::size_t{1} << p) < n) ++p;
    return p;
}

void fft_pow2(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size is not a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> fourier_coeffs(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i];
    fft_pow2(out, -1);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= inv;
    return out;
}

std::vector<cplx> fourier_synthesis(std::span<const cplx> coeffs) {
    std::vector<cplx> out(coeffs.begin(), coeffs.end());
    fft_pow2(out, +1);
    return out;
}

}  // namespace fdec
