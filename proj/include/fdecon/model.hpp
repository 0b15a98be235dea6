#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fdecon/grid.hpp"
#include "fdecon/longmem.hpp"

namespace fdec {

/// Observations Y(t_i, x_l) on the regular design t_i = i/N, x_l = l/M.
struct ObservationGrid {
    Grid data;
    int n_time() const { return data.n_time; }
    int n_space() const { return data.n_space; }

    void validate() const;
};

enum class KernelFamily { PurePower, SmoothPower };

/// Convolution kernel through its functional Fourier coefficients; both shipped
/// families satisfy K1 |m|^{-2 nu} <= |g_m(x)|^2 <= K2 |m|^{-2 nu} away from m = 0.
struct KernelSpec {
    double nu = 1.0;
    KernelFamily family = KernelFamily::PurePower;
    bool modulated = false;  // SmoothPower only: profile modulation 1 + cos(2 pi x)/2

    void validate() const;
};

std::complex<double> kernel_fourier(const KernelSpec& spec, int m, double x);

struct KernelCertificate {
    double k1_hat = 0.0;
    double k2_hat = 0.0;
};

/// Enumerates |g_m(x)|^2 |m|^{2 nu} over 1 <= |m| <= m_max and the x-grid,
/// reporting the extreme ratios (the Assumption A.2 constants).
KernelCertificate certify_kernel(const KernelSpec& spec, int m_max, int x_grid);

struct NominalSmoothness {
    double s1 = 2.0, s2 = 2.0, p = 2.0, q = 2.0, radius = 1.0;
};

struct TestFunction {
    std::string name;
    std::function<double(double, double)> eval;
    NominalSmoothness smoothness;
    // optional fast path for separable functions; falls back to eval
    std::function<Grid(int, int)> grid_sampler;

    Grid sample_grid(int n, int m) const;
};

/// SMOOTH, TIMEBUMP, SPACEROUGH, TIMEDENSE (see README for their structure).
std::vector<TestFunction> builtin_test_functions();

TestFunction find_test_function(const std::string& name);

/// Noiseless circular convolution of f with the kernel, sampled on the grid.
Grid convolve_truth(const Grid& f_grid, const KernelSpec& kernel);

/// Forward simulation of the observation model: convolution plus sigma-scaled
/// per-profile noise. Deterministic in (noise.seed, replicate).
ObservationGrid simulate(const TestFunction& f, const KernelSpec& kernel, const NoiseSpec& noise,
                         int n, int m, std::uint64_t replicate);

ObservationGrid simulate_from_grid(const Grid& f_grid, const KernelSpec& kernel,
                                   const NoiseSpec& noise, std::uint64_t replicate);

/// FDGRID01 binary format: magic "FDGRID01", u32 N, u32 M (little-endian),
/// then N*M float64 row-major (time-major).
void write_grid(const std::filesystem::path& path, const Grid& grid);
Grid read_grid(const std::filesystem::path& path);

/// CSV export (header row t_index,x_index,value) for small grids.
void write_grid_csv(const std::filesystem::path& path, const Grid& grid);

}  // namespace fdec
