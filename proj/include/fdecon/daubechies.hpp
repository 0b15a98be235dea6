#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fdecon/fft.hpp"

namespace fdec {

/// Finitely supported periodized wavelet basis in the space variable, built
/// from an orthonormal scaling filter (sum of taps = sqrt(2), double-shift
/// orthogonal). Transforms use circular wrap, so the basis is exactly
/// orthonormal on every power-of-two grid.
struct DaubBasisSpec {
    int filter_order = 8;  // vanishing moments; taps.size() == 2*filter_order
    int coarsest_level = 0;  // m20
    std::vector<double> filter_taps;

    /// Built-in filters: order 1 (Haar), 2, 4, 8.
    static DaubBasisSpec daubechies(int order);

    /// Throws if the filter is not orthonormal to 1e-12.
    void validate() const;
};

/// Packed coefficient layout for a length-n transform (n = 2^J):
/// index 0 = scaling coefficient at level 0, index 2^j + k = detail (j, k).
/// Forward transform is in place, down to level 0.
void pdwt(std::span<cplx> v, const DaubBasisSpec& spec);
void pdwt(std::span<double> v, const DaubBasisSpec& spec);

/// Inverse of pdwt, in place.
void ipdwt(std::span<cplx> v, const DaubBasisSpec& spec);
void ipdwt(std::span<double> v, const DaubBasisSpec& spec);

/// Wavelet eta_{j2,k2} sampled on the m-point grid, scaled so that
/// (1/m) sum_l eta(x_l)^2 = 1.
std::vector<double> daubechies_eval(const DaubBasisSpec& spec, int j2, int k2, int m);

/// Scaling function at the coarsest level, same normalization.
std::vector<double> daubechies_scaling_eval(const DaubBasisSpec& spec, int k2, int m);

}  // namespace fdec
