#include "fdecon/daubechies.hpp"

#include <cmath>
#include <stdexcept>

namespace fdec {

namespace {

// Scaling filters, sum = sqrt(2). db4/db8 values computed by spectral
// factorization of the binomial half-band polynomial at 40-digit precision.
const std::vector<double> kDb1 = {
    0.70710678118654752440, 0.70710678118654752440};

const std::vector<double> kDb2 = {
    0.48296291314469025100, 0.83651630373746899010,
    0.22414386804185735410, -0.12940952255092145120};

const std::vector<double> kDb4 = {
    0.23037781330889650086, 0.71484657055291564709,
    0.63088076792985890788, -0.027983769416859854211,
    -0.18703481171909308408, 0.030841381835560763627,
    0.032883011666885199735, -0.010597401785069032105};

const std::vector<double> kDb8 = {
    0.054415842243104009955, 0.31287159091429997066,
    0.67563073629728980681, 0.58535468365420671277,
    -0.015829105256349305667, -0.28401554296154692652,
    0.00047248457391328277036, 0.12874742662047845886,
    -0.01736930100180754617, -0.044088253930794751507,
    0.013981027917398281649, 0.0087460940474057767164,
    -0.0048703529934515743104, -0.0003917403733769470463,
    0.00067544940645056936637, -0.00011747678412476953373};

std::vector<double> highpass_of(const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t n = 0; n < L; ++n)
        g[n] = ((n & 1) ? -1.0 : 1.0) * h[L - 1 - n];
    return g;
}

template <class T>
void pdwt_impl(std::span<T> v, const DaubBasisSpec& spec) {
    const std::size_t n = v.size();
    const int levels = log2_exact(n);
    const auto& h = spec.filter_taps;
    const auto g = highpass_of(h);
    const std::size_t L = h.size();
    std::vector<T> buf(n);
    std::size_t len = n;
    for (int j = levels - 1; j >= spec.coarsest_level; --j) {
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            T a{}, d{};
            for (std::size_t t = 0; t < L; ++t) {
                const T s = v[(2 * k + t) % len];
                a += h[t] * s;
                d += g[t] * s;
            }
            buf[k] = a;
            buf[half + k] = d;
        }
        for (std::size_t k = 0; k < half; ++k) {
            v[k] = buf[k];
            v[half + k] = buf[half + k];  // details land at packed slots 2^j + k
        }
        len = half;
    }
}

template <class T>
void ipdwt_impl(std::span<T> v, const DaubBasisSpec& spec) {
    const std::size_t n = v.size();
    const int levels = log2_exact(n);
    const auto& h = spec.filter_taps;
    const auto g = highpass_of(h);
    const std::size_t L = h.size();
    std::vector<T> buf(n);
    std::size_t half = std::size_t{1} << spec.coarsest_level;
    for (int j = spec.coarsest_level; j < levels; ++j, half *= 2) {
        const std::size_t len = 2 * half;
        for (std::size_t i = 0; i < len; ++i) buf[i] = T{};
        for (std::size_t k = 0; k < half; ++k) {
            const T a = v[k];
            const T d = v[half + k];
            for (std::size_t t = 0; t < L; ++t)
                buf[(2 * k + t) % len] += a * h[t] + d * g[t];
        }
        for (std::size_t i = 0; i < len; ++i) v[i] = buf[i];
    }
}

}  // namespace

DaubBasisSpec DaubBasisSpec::daubechies(int order) {
    DaubBasisSpec spec;
    spec.filter_order = order;
    switch (order) {
        case 1: spec.filter_taps = kDb1; break;
        case 2: spec.filter_taps = kDb2; break;
        case 4: spec.filter_taps = kDb4; break;
        case 8: spec.filter_taps = kDb8; break;
        default: throw std::domain_error("daubechies: built-in orders are 1, 2, 4, 8");
    }
    spec.validate();
    return spec;
}

void DaubBasisSpec::validate() const {
    const auto& h = filter_taps;
    if (h.empty() || h.size() % 2 != 0)
        throw std::invalid_argument("daubechies: filter must have even positive length");
    double s = 0.0;
    for (double c : h) s += c;
    if (std::abs(s - std::sqrt(2.0)) > 1e-12)
        throw std::invalid_argument("daubechies: filter taps must sum to sqrt(2)");
    for (std::size_t shift = 0; 2 * shift < h.size(); ++shift) {
        double dot = 0.0;
        for (std::size_t i = 0; i + 2 * shift < h.size(); ++i) dot += h[i] * h[i + 2 * shift];
        const double want = shift == 0 ? 1.0 : 0.0;
        if (std::abs(dot - want) > 1e-12)
            throw std::invalid_argument("daubechies: filter violates double-shift orthogonality");
    }
}

void pdwt(std::span<cplx> v, const DaubBasisSpec& spec) { pdwt_impl(v, spec); }
void pdwt(std::span<double> v, const DaubBasisSpec& spec) { pdwt_impl(v, spec); }
void ipdwt(std::span<cplx> v, const DaubBasisSpec& spec) { ipdwt_impl(v, spec); }
void ipdwt(std::span<double> v, const DaubBasisSpec& spec) { ipdwt_impl(v, spec); }

namespace {

std::vector<double> eval_unit(const DaubBasisSpec& spec, std::size_t packed, int m) {
    std::vector<double> v(m, 0.0);
    v[packed] = std::sqrt(static_cast<double>(m));
    ipdwt(std::span<double>(v), spec);
    return v;
}

}  // namespace

std::vector<double> daubechies_eval(const DaubBasisSpec& spec, int j2, int k2, int m) {
    if (!is_pow2(static_cast<std::size_t>(m))) throw std::invalid_argument("daubechies_eval: grid size not a power of two");
    const int levels = log2_exact(static_cast<std::size_t>(m));
    if (j2 < spec.coarsest_level || j2 >= levels)
        throw std::domain_error("daubechies_eval: resolution level does not fit on the grid");
    if (k2 < 0 || k2 >= (1 << j2)) throw std::domain_error("daubechies_eval: translation out of range");
    return eval_unit(spec, (std::size_t{1} << j2) + k2, m);
}

std::vector<double> daubechies_scaling_eval(const DaubBasisSpec& spec, int k2, int m) {
    if (!is_pow2(static_cast<std::size_t>(m))) throw std::invalid_argument("daubechies_scaling_eval: grid size not a power of two");
    if (k2 < 0 || k2 >= (1 << spec.coarsest_level))
        throw std::domain_error("daubechies_scaling_eval: translation out of range");
    return eval_unit(spec, static_cast<std::size_t>(k2), m);
}

}  // namespace fdec
