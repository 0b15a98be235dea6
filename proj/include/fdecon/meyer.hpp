#pragma once

#include <complex>
#include <vector>

#include "fdecon/fft.hpp"

namespace fdec {

/// Band-limited periodized wavelet basis in the time variable.
/// The mother wavelet transform vanishes outside |xi| in [2pi/3, 8pi/3] and
/// carries the e^{-i xi/2} phase so that the wavelet is real-valued.
struct MeyerBasisSpec {
    int coarsest_level = 0;  // m10
    int aux_poly_degree = 3;
};

/// Auxiliary smoothing polynomial, clamped to [0,1]; satisfies P(x)+P(1-x)=1.
double meyer_aux_poly(double x, int degree);

/// Modulus of the mother-wavelet Fourier transform at angular frequency xi.
double meyer_window(double xi, int degree);

/// Modulus of the scaling-function Fourier transform (support |xi| <= 4pi/3).
double meyer_scaling_window(double xi, int degree);

struct FreqSupport {
    int level = 0;
    std::vector<int> members;  // signed integer frequencies, 0 never included
};

/// W_{j1}: the integer frequencies where the level-j1 coefficients are nonzero,
/// i.e. 2^{j1}/3 <= |m| <= 2^{j1+2}/3.
FreqSupport meyer_support(const MeyerBasisSpec& spec, int j1);

/// Fourier coefficient psi_{j1,k1,m} = 2^{-j1/2} e^{-2pi i m k1/2^{j1}} Psi(2pi m/2^{j1}),
/// zero for m outside meyer_support. |psi_{j1,k1,m}| <= 2^{-j1/2}.
cplx meyer_fourier_coeff(const MeyerBasisSpec& spec, int j1, int k1, int m);

/// Fourier coefficient of the level-m10 periodized scaling function phi_{m10,k}.
cplx meyer_scaling_fourier_coeff(const MeyerBasisSpec& spec, int k, int m);

/// Wavelet sampled on the n-point grid t_i = i/n (n a power of two, band must fit
/// under the Nyquist frequency).
std::vector<double> meyer_eval_grid(const MeyerBasisSpec& spec, int j1, int k1, int n);

std::vector<double> meyer_scaling_eval_grid(const MeyerBasisSpec& spec, int k, int n);

}  // namespace fdec
