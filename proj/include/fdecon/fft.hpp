#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fdec {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n);
int log2_exact(std::size_t n);

/// In-place radix-2 FFT, n a power of two. sign = -1 forward, +1 inverse.
/// No normalization is applied in either direction.
void fft_pow2(std::span<cplx> a, int sign);

/// Fourier coefficients f_m = (1/n) sum_i v[i] e^{-2pi i m i/n}, stored at index m mod n.
std::vector<cplx> fourier_coeffs(std::span<const double> v);

/// Inverse of fourier_coeffs: v[i] = sum_m c[m] e^{+2pi i m i/n}.
std::vector<cplx> fourier_synthesis(std::span<const cplx> coeffs);

}  // namespace fdec
