#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fdec {

enum class NoiseGenerator { Fgn, Farima, Iid };

/// Per-profile long-memory noise description. alphas[l] in (0,1]; alpha = 1 is
/// the independence boundary (required under Iid). Marginal variance is 1, so
/// the observation-model sigma is the only amplitude knob.
struct NoiseSpec {
    double sigma = 1.0;
    std::vector<double> alphas;
    NoiseGenerator generator = NoiseGenerator::Fgn;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Autocovariance r(k) of unit-variance fractional Gaussian noise,
/// r(k) = ((k+1)^{2H} - 2 k^{2H} + |k-1|^{2H}) / 2. Requires 0.5 <= hurst < 1.
double fgn_autocovariance(double hurst, long lag);

/// Autocovariance of FARIMA(0,d,0) normalized to r(0) = 1, 0 <= d < 1/2.
double farima_autocovariance(double d, long lag);

/// Autocovariance for profile l of the spec (Hurst calibration H = 1 - alpha/2,
/// FARIMA calibration d = (1-alpha)/2).
double noise_autocovariance(const NoiseSpec& spec, int profile, long lag);

/// One zero-mean unit-variance Gaussian path of length n (a power of two) for
/// the given profile. Deterministic in (spec.seed, profile, replicate); draws
/// for distinct profiles or replicates are independent.
std::vector<double> sample_noise(const NoiseSpec& spec, int n, int profile, std::uint64_t replicate);

struct EigenCertificate {
    int n = 0;
    double alpha = 1.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double c1_hat = 0.0;  // lambda_min / n^{1-alpha}
    double c2_hat = 0.0;  // lambda_max / n^{1-alpha}
};

/// Extreme eigenvalues of the exact Toeplitz covariance for the generator, one
/// certificate per ladder entry. Lanczos with full reorthogonalization and an
/// FFT-based Toeplitz product; accurate to ~1e-6 relative at the spectrum edges.
std::vector<EigenCertificate> certify_a1(const NoiseSpec& spec, int profile,
                                         std::span<const int> n_ladder);

/// Extreme eigenvalues of the symmetric Toeplitz matrix with first row acvf.
std::pair<double, double> toeplitz_extreme_eigenvalues(std::span<const double> acvf);

/// Deterministic stream of standard normals derived from (seed, profile, replicate).
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t profile, std::uint64_t replicate);
    double next();

  private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
    std::uint64_t next_u64();
};

}  // namespace fdec
