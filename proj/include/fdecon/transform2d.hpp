#pragma once

#include <complex>
#include <vector>

#include "fdecon/daubechies.hpp"
#include "fdecon/grid.hpp"
#include "fdecon/meyer.hpp"

namespace fdec {

struct WaveletIndex {
    int j1 = 0;
    int k1 = 0;
    int j2 = 0;
    int k2 = 0;
};

struct Basis2D {
    MeyerBasisSpec meyer;
    DaubBasisSpec daub = DaubBasisSpec::daubechies(8);
};

/// Hyperbolic (tensor) wavelet coefficients over Omega(J1, J2) plus the coarse
/// scaling layers needed for grid-exact reconstruction.
///
/// Layout: row-major (time index) x (space index), both packed DWT style:
///   time index  0 = time scaling (level m10), 2^{j1}+k1 = Meyer wavelet
///   space index 0 = space scaling (level m20), 2^{j2}+k2 = Daubechies wavelet
struct CoeffTable {
    int j1_levels = 0;  // J1: wavelet levels m10..J1-1 on the time axis
    int j2_levels = 0;  // J2: wavelet levels m20..J2-1 on the space axis
    std::vector<cplx> c;

    int n_time_idx() const { return 1 << j1_levels; }
    int n_space_idx() const { return 1 << j2_levels; }

    cplx& at(int ti, int si) { return c[static_cast<std::size_t>(ti) * n_space_idx() + si]; }
    cplx at(int ti, int si) const { return c[static_cast<std::size_t>(ti) * n_space_idx() + si]; }

    cplx& wavelet(const WaveletIndex& w) { return at((1 << w.j1) + w.k1, (1 << w.j2) + w.k2); }
    cplx wavelet(const WaveletIndex& w) const { return at((1 << w.j1) + w.k1, (1 << w.j2) + w.k2); }

    /// Sum of |c|^2 over every stored coefficient.
    double energy() const;
};

/// beta_w = <f, psi_{j1,k1} x eta_{j2,k2}> for all w in Omega(J1,J2), plus the
/// scaling layers. Meyer side evaluated in the Fourier domain (Plancherel),
/// Daubechies side via the periodic DWT.
CoeffTable analyze_2d(const Grid& f, const Basis2D& basis, int j1_levels, int j2_levels);

/// Evaluates sum_w c_w psi(t_i) eta(x_l) on the grid; throws if the imaginary
/// residual exceeds 1e-6 of the real energy.
Grid synthesize_2d(const CoeffTable& coeffs, const Basis2D& basis, int n, int m);

/// Largest J1 such that every Meyer level below it fits under the Nyquist
/// frequency of an n-point grid (n/2 > 2^{J1+1}/3).
int max_time_levels(int n);

}  // namespace fdec
