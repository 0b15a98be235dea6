#include "fdecon/model.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "fdecon/fft.hpp"

namespace fdec {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGoldenFrac = 0.61803398874989484820;  // phase scrambler for timedense
}

void ObservationGrid::validate() const {
    if (data.n_time < 8 || data.n_space < 8 ||
        !is_pow2(static_cast<std::size_t>(data.n_time)) ||
        !is_pow2(static_cast<std::size_t>(data.n_space)))
        throw std::invalid_argument("observation grid sides must be powers of two, >= 8");
}

void KernelSpec::validate() const {
    if (nu < 0.0) throw std::invalid_argument("kernel: nu must be nonnegative");
    if (modulated && family != KernelFamily::SmoothPower)
        throw std::invalid_argument("kernel: modulation is only defined for the smooth_power family");
}

std::complex<double> kernel_fourier(const KernelSpec& spec, int m, double x) {
    if (m == 0) return {1.0, 0.0};  // DC convention: the mean of f stays identifiable
    switch (spec.family) {
        case KernelFamily::PurePower:
            return {std::pow(std::abs(static_cast<double>(m)), -spec.nu), 0.0};
        case KernelFamily::SmoothPower: {
            const double md = static_cast<double>(m);
            double g = std::pow(1.0 + md * md, -spec.nu / 2.0);
            if (spec.modulated) g *= 1.0 + 0.5 * std::cos(2.0 * kPi * x);
            return {g, 0.0};
        }
    }
    throw std::logic_error("kernel_fourier: unknown family");
}

KernelCertificate certify_kernel(const KernelSpec& spec, int m_max, int x_grid) {
    spec.validate();
    KernelCertificate cert;
    cert.k1_hat = std::numeric_limits<double>::infinity();
    cert.k2_hat = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        for (int lx = 0; lx < x_grid; ++lx) {
            const double x = static_cast<double>(lx) / x_grid;
            const double ratio = std::norm(kernel_fourier(spec, m, x)) *
                                 std::pow(static_cast<double>(m), 2.0 * spec.nu);
            cert.k1_hat = std::min(cert.k1_hat, ratio);
            cert.k2_hat = std::max(cert.k2_hat, ratio);
        }
    }
    return cert;
}

Grid TestFunction::sample_grid(int n, int m) const {
    if (grid_sampler) return grid_sampler(n, m);
    Grid g(n, m);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        for (int l = 0; l < m; ++l) g.at(i, l) = eval(t, static_cast<double>(l) / m);
    }
    return g;
}

namespace {

double frac(double x) { return x - std::floor(x); }

// sum_{r=1..2048} r^{-5/2} cos(2 pi r t + phi_r), scrambled deterministic phases
double timedense_u(double t) {
    double s = 0.0;
    for (int r = 1; r <= 2048; ++r) {
        const double phi = 2.0 * kPi * frac(r * kGoldenFrac);
        s += std::pow(static_cast<double>(r), -2.5) * std::cos(2.0 * kPi * r * t + phi);
    }
    return s;
}

double bump(double r) {  // C-infinity, supported on |r| < 1
    const double r2 = r * r;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2) + 1.0) : 0.0;
}

double circ_dist(double a, double b) {
    const double d = std::abs(frac(a) - frac(b));
    return std::min(d, 1.0 - d);
}

double triangle_wave(double x) {  // mean-zero, kinks at 0 and 1/2
    return 4.0 * std::abs(frac(x) - 0.5) - 1.0;
}

}  // namespace

std::vector<TestFunction> builtin_test_functions() {
    std::vector<TestFunction> out;

    {
        TestFunction f;
        f.name = "smooth";
        f.eval = [](double t, double x) {
            return 1.0 + std::cos(2 * kPi * t) * (0.6 + 0.3 * std::sin(2 * kPi * x)) +
                   0.5 * std::sin(4 * kPi * t) * std::cos(2 * kPi * x);
        };
        f.smoothness = {4.0, 4.0, 2.0, 2.0, 1.0};
        out.push_back(std::move(f));
    }
    {
        TestFunction f;
        f.name = "timebump";
        f.eval = [](double t, double x) {
            const double b = 1.2 * bump(circ_dist(t, 0.31) / 0.05) +
                             0.8 * bump(circ_dist(t, 0.62) / 0.03) +
                             1.0 * bump(circ_dist(t, 0.85) / 0.08);
            return b * (1.0 + 0.3 * std::cos(2 * kPi * x));
        };
        f.smoothness = {1.0, 4.0, 1.0, 1.0, 1.0};
        out.push_back(std::move(f));
    }
    {
        TestFunction f;
        f.name = "spacerough";
        f.eval = [](double t, double x) {
            return (1.0 + 0.5 * std::cos(2 * kPi * t)) * triangle_wave(x);
        };
        f.smoothness = {4.0, 1.0, 2.0, 2.0, 1.0};
        out.push_back(std::move(f));
    }
    {
        TestFunction f;
        f.name = "timedense";
        f.eval = [](double t, double x) { return timedense_u(t) * std::cos(2 * kPi * x); };
        f.smoothness = {2.0, 4.0, 2.0, 2.0, 1.0};
        f.grid_sampler = [](int n, int m) {
            Grid g(n, m);
            std::vector<double> u(n), v(m);
            for (int i = 0; i < n; ++i) u[i] = timedense_u(static_cast<double>(i) / n);
            for (int l = 0; l < m; ++l) v[l] = std::cos(2 * kPi * l / m);
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < m; ++l) g.at(i, l) = u[i] * v[l];
            return g;
        };
        out.push_back(std::move(f));
    }
    return out;
}

TestFunction find_test_function(const std::string& name) {
    for (auto& f : builtin_test_functions())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown test function: " + name);
}

Grid convolve_truth(const Grid& f_grid, const KernelSpec& kernel) {
    kernel.validate();
    const int n = f_grid.n_time, m = f_grid.n_space;
    if (!is_pow2(static_cast<std::size_t>(n)) || !is_pow2(static_cast<std::size_t>(m)))
        throw std::invalid_argument("convolve_truth: grid sides must be powers of two");
    Grid out(n, m);
    std::vector<double> col(n);
    for (int l = 0; l < m; ++l) {
        const double x = static_cast<double>(l) / m;
        for (int i = 0; i < n; ++i) col[i] = f_grid.at(i, l);
        auto fc = fourier_coeffs(col);
        for (int mi = 0; mi < n; ++mi) {
            const int signed_m = mi < n / 2 ? mi : mi - n;
            fc[mi] *= kernel_fourier(kernel, signed_m, x);
        }
        auto vals = fourier_synthesis(fc);
        for (int i = 0; i < n; ++i) out.at(i, l) = vals[i].real();
    }
    return out;
}

ObservationGrid simulate_from_grid(const Grid& f_grid, const KernelSpec& kernel,
                                   const NoiseSpec& noise, std::uint64_t replicate) {
    noise.validate();
    if (static_cast<int>(noise.alphas.size()) != f_grid.n_space)
        throw std::invalid_argument("simulate: noise.alphas length must equal the profile count");
    ObservationGrid out;
    out.data = convolve_truth(f_grid, kernel);
    out.validate();
    const int n = f_grid.n_time, m = f_grid.n_space;
    if (noise.sigma > 0.0) {
        for (int l = 0; l < m; ++l) {
            auto xi = sample_noise(noise, n, l, replicate);
            for (int i = 0; i < n; ++i) out.data.at(i, l) += noise.sigma * xi[i];
        }
    }
    return out;
}

ObservationGrid simulate(const TestFunction& f, const KernelSpec& kernel, const NoiseSpec& noise,
                         int n, int m, std::uint64_t replicate) {
    return simulate_from_grid(f.sample_grid(n, m), kernel, noise, replicate);
}

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'D', 'G', 'R', 'I', 'D', '0', '1'};

void put_u32_le(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b = {static_cast<unsigned char>(v & 0xff),
                                      static_cast<unsigned char>((v >> 8) & 0xff),
                                      static_cast<unsigned char>((v >> 16) & 0xff),
                                      static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32_le(std::istream& is, const char* field) {
    std::array<unsigned char, 4> b;
    if (!is.read(reinterpret_cast<char*>(b.data()), 4))
        throw std::runtime_error(std::string("grid file truncated while reading ") + field);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

static_assert(std::endian::native == std::endian::little,
              "grid I/O assumes a little-endian host");

}  // namespace

void write_grid(const std::filesystem::path& path, const Grid& grid) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open grid file for writing: " + path.string());
    os.write(kMagic.data(), kMagic.size());
    put_u32_le(os, static_cast<std::uint32_t>(grid.n_time));
    put_u32_le(os, static_cast<std::uint32_t>(grid.n_space));
    os.write(reinterpret_cast<const char*>(grid.v.data()),
             static_cast<std::streamsize>(grid.v.size() * sizeof(double)));
    if (!os) throw std::runtime_error("failed writing grid file: " + path.string());
}

Grid read_grid(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open grid file: " + path.string());
    std::array<char, 8> magic;
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw std::runtime_error("grid file format error: bad magic (expected FDGRID01) in " + path.string());
    const auto n = get_u32_le(is, "header field N");
    const auto m = get_u32_le(is, "header field M");
    if (n == 0 || m == 0 || n > (1u << 24) || m > (1u << 24))
        throw std::runtime_error("grid file format error: implausible header dimensions in " + path.string());
    Grid g(static_cast<int>(n), static_cast<int>(m));
    if (!is.read(reinterpret_cast<char*>(g.v.data()),
                 static_cast<std::streamsize>(g.v.size() * sizeof(double))))
        throw std::runtime_error("grid file truncated while reading payload: " + path.string());
    return g;
}

void write_grid_csv(const std::filesystem::path& path, const Grid& grid) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open csv file for writing: " + path.string());
    os << "t_index,x_index,value\n";
    os.precision(17);
    for (int i = 0; i < grid.n_time; ++i)
        for (int l = 0; l < grid.n_space; ++l)
            os << i << ',' << l << ',' << grid.at(i, l) << '\n';
    if (!os) throw std::runtime_error("failed writing csv file: " + path.string());
}

}  // namespace fdec
