#include "fdecon/longmem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fdecon/fft.hpp"

namespace fdec {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t profile, std::uint64_t replicate) {
    std::uint64_t st = seed;
    (void)splitmix64(st);
    st ^= 0x517cc1b727220a95ULL * (profile + 1);
    (void)splitmix64(st);
    st ^= 0x2545f4914f6cdd1dULL * (replicate + 1);
    for (auto& w : s_) w = splitmix64(st);
}

std::uint64_t GaussianStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double GaussianStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] uniforms; no rejection, so the draw count is fixed.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(ang);
    have_spare_ = true;
    return r * std::cos(ang);
}

void NoiseSpec::validate() const {
    if (sigma < 0) throw std::invalid_argument("noise: sigma must be nonnegative");
    if (alphas.empty()) throw std::invalid_argument("noise: alphas must be nonempty");
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("noise: alpha must lie in (0, 1]");
        if (generator == NoiseGenerator::Iid && a != 1.0)
            throw std::invalid_argument("noise: IID generator requires alpha = 1");
    }
}

double fgn_autocovariance(double hurst, long lag) {
    if (!(hurst >= 0.5 && hurst < 1.0)) throw std::domain_error("fgn_autocovariance: hurst must lie in [0.5, 1)");
    if (lag < 0) throw std::domain_error("fgn_autocovariance: lag must be nonnegative");
    if (lag == 0) return 1.0;
    const double k = static_cast<double>(lag);
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(k - 1.0, h2));
}

double farima_autocovariance(double d, long lag) {
    if (!(d >= 0.0 && d < 0.5)) throw std::domain_error("farima_autocovariance: d must lie in [0, 1/2)");
    if (lag < 0) throw std::domain_error("farima_autocovariance: lag must be nonnegative");
    // r(k)/r(k-1) = (k-1+d)/(k-d); r(0) = 1 after normalization
    double r = 1.0;
    for (long k = 1; k <= lag; ++k) r *= (static_cast<double>(k) - 1.0 + d) / (static_cast<double>(k) - d);
    return r;
}

double noise_autocovariance(const NoiseSpec& spec, int profile, long lag) {
    if (profile < 0 || profile >= static_cast<int>(spec.alphas.size()))
        throw std::out_of_range("noise_autocovariance: profile index out of range");
    const double alpha = spec.alphas[profile];
    switch (spec.generator) {
        case NoiseGenerator::Iid: return lag == 0 ? 1.0 : 0.0;
        case NoiseGenerator::Fgn: return fgn_autocovariance(1.0 - alpha / 2.0, lag);
        case NoiseGenerator::Farima: return farima_autocovariance((1.0 - alpha) / 2.0, lag);
    }
    throw std::logic_error("noise_autocovariance: unknown generator");
}

namespace {

// Eigenvalues of the circulant embedding of the order-n Toeplitz covariance.
std::vector<double> embedding_eigenvalues(const NoiseSpec& spec, int profile, int n) {
    const std::size_t n2 = 2 * static_cast<std::size_t>(n);
    std::vector<cplx> c(n2);
    for (int k = 0; k <= n; ++k) c[k] = noise_autocovariance(spec, profile, k);
    for (int k = 1; k < n; ++k) c[n2 - k] = c[k];
    fft_pow2(std::span<cplx>(c), -1);
    std::vector<double> lam(n2);
    for (std::size_t i = 0; i < n2; ++i) lam[i] = c[i].real();
    return lam;
}

}  // namespace

std::vector<double> sample_noise(const NoiseSpec& spec, int n, int profile, std::uint64_t replicate) {
    spec.validate();
    if (!is_pow2(static_cast<std::size_t>(n))) throw std::invalid_argument("sample_noise: n must be a power of two");
    if (profile < 0 || profile >= static_cast<int>(spec.alphas.size()))
        throw std::out_of_range("sample_noise: profile index out of range");

    GaussianStream rng(spec.seed, static_cast<std::uint64_t>(profile), replicate);
    std::vector<double> out(n);

    const double alpha = spec.alphas[profile];
    const bool white = spec.generator == NoiseGenerator::Iid ||
                       (alpha == 1.0);  // both LRD families degenerate to white noise at alpha = 1
    if (white) {
        for (int i = 0; i < n; ++i) out[i] = rng.next();
        return out;
    }

    // Davies-Harte circulant embedding.
    auto lam = embedding_eigenvalues(spec, profile, n);
    const std::size_t n2 = lam.size();
    double lmax = 0.0;
    for (double v : lam) lmax = std::max(lmax, std::abs(v));
    for (double& v : lam) {
        if (v < -1e-9 * lmax)
            throw std::runtime_error("sample_noise: circulant embedding is not positive semidefinite");
        v = std::max(v, 0.0);
    }

    std::vector<cplx> z(n2);
    z[0] = std::sqrt(lam[0] / static_cast<double>(n2)) * rng.next();
    z[n] = std::sqrt(lam[n] / static_cast<double>(n2)) * rng.next();
    for (int k = 1; k < n; ++k) {
        const double s = std::sqrt(lam[k] / static_cast<double>(2 * n2));
        const double re = rng.next(), im = rng.next();
        z[k] = cplx{s * re, s * im};
        z[n2 - k] = std::conj(z[k]);
    }
    fft_pow2(std::span<cplx>(z), -1);
    for (int i = 0; i < n; ++i) out[i] = z[i].real();
    return out;
}

namespace {

// y = T x for the symmetric Toeplitz matrix with first row r, via the circulant
// embedding of size 2n.
struct ToeplitzProduct {
    std::size_t n;
    std::vector<cplx> fc;  // FFT of the embedded first row

    explicit ToeplitzProduct(std::span<const double> r) : n(r.size()), fc(2 * r.size()) {
        const std::size_t n2 = 2 * n;
        for (std::size_t k = 0; k < n; ++k) fc[k] = r[k];
        fc[n] = 0.0;
        for (std::size_t k = 1; k < n; ++k) fc[n2 - k] = r[k];
        fft_pow2(std::span<cplx>(fc), -1);
    }

    std::vector<double> apply(std::span<const double> x) const {
        const std::size_t n2 = 2 * n;
        std::vector<cplx> w(n2, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) w[i] = x[i];
        fft_pow2(std::span<cplx>(w), -1);
        for (std::size_t i = 0; i < n2; ++i) w[i] *= fc[i];
        fft_pow2(std::span<cplx>(w), +1);
        std::vector<double> y(n);
        const double inv = 1.0 / static_cast<double>(n2);
        for (std::size_t i = 0; i < n; ++i) y[i] = w[i].real() * inv;
        return y;
    }
};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Eigenvalues of a symmetric tridiagonal matrix by bisection (Sturm counts).
std::pair<double, double> tridiag_extremes(const std::vector<double>& diag,
                                           const std::vector<double>& off) {
    const int k = static_cast<int>(diag.size());
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < k; ++i) {
        const double b1 = i > 0 ? std::abs(off[i - 1]) : 0.0;
        const double b2 = i < k - 1 ? std::abs(off[i]) : 0.0;
        lo = std::min(lo, diag[i] - b1 - b2);
        hi = std::max(hi, diag[i] + b1 + b2);
    }
    auto count_below = [&](double x) {
        int cnt = 0;
        double d = 1.0;
        for (int i = 0; i < k; ++i) {
            const double off2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
            d = diag[i] - x - off2 / d;
            if (d == 0.0) d = 1e-300;
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    auto kth_eigenvalue = [&](int target) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            if (count_below(mid) >= target + 1) b = mid;
            else a = mid;
        }
        return 0.5 * (a + b);
    };
    return {kth_eigenvalue(0), kth_eigenvalue(k - 1)};
}

}  // namespace

std::pair<double, double> toeplitz_extreme_eigenvalues(std::span<const double> acvf) {
    const std::size_t n = acvf.size();
    if (n == 0) throw std::invalid_argument("toeplitz_extreme_eigenvalues: empty input");
    if (n == 1) return {acvf[0], acvf[0]};
    ToeplitzProduct T(acvf);

    const int max_iter = static_cast<int>(std::min<std::size_t>(n, 400));
    std::vector<std::vector<double>> q;
    std::vector<double> diag, off;

    // deterministic start vector
    std::vector<double> v(n);
    std::uint64_t st = 0x6a09e667f3bcc908ULL;
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53 - 0.5;
        nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    q.push_back(v);

    double beta_prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        auto w = T.apply(q.back());
        if (it > 0)
            for (std::size_t i = 0; i < n; ++i) w[i] -= beta_prev * q[it - 1][i];
        const double a = dot(w, q.back());
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * q.back()[i];
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& qi : q) {
                const double c = dot(w, qi);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * qi[i];
            }
        diag.push_back(a);
        double b = std::sqrt(dot(w, w));
        if (b < 1e-13 || it == max_iter - 1) break;
        off.push_back(b);
        for (auto& x : w) x /= b;
        q.push_back(std::move(w));
        beta_prev = b;
    }
    return tridiag_extremes(diag, off);
}

std::vector<EigenCertificate> certify_a1(const NoiseSpec& spec, int profile,
                                         std::span<const int> n_ladder) {
    spec.validate();
    std::vector<EigenCertificate> out;
    out.reserve(n_ladder.size());
    for (int n : n_ladder) {
        if (n < 8) throw std::invalid_argument("certify_a1: ladder entries must be >= 8");
        std::vector<double> r(n);
        for (int k = 0; k < n; ++k) r[k] = noise_autocovariance(spec, profile, k);
        auto [lmin, lmax] = toeplitz_extreme_eigenvalues(r);
        if (!(lmin > 0.0) || !(lmax >= lmin))
            throw std::runtime_error("certify_a1: eigenvalue computation failed");
        EigenCertificate cert;
        cert.n = n;
        cert.alpha = spec.alphas[profile];
        cert.lambda_min = lmin;
        cert.lambda_max = lmax;
        const double scale = std::pow(static_cast<double>(n), 1.0 - cert.alpha);
        cert.c1_hat = lmin / scale;
        cert.c2_hat = lmax / scale;
        out.push_back(cert);
    }
    return out;
}

}  // namespace fdec
