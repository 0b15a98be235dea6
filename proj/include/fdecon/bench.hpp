#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdecon/estimator.hpp"
#include "fdecon/model.hpp"

namespace fdec {

/// Anisotropic Besov ball parameters with the derived indices used by the
/// rate theory: s_i* = s_i + 1/2 - 1/p, s_1' = s_1 + 1/2 - 1/min(2,p).
struct BesovSpec {
    double s1 = 2.0, s2 = 2.0, p = 2.0, q = 2.0, radius = 1.0;

    double s1_star() const { return s1 + 0.5 - 1.0 / p; }
    double s2_star() const { return s2 + 0.5 - 1.0 / p; }
    double s1_prime() const { return s1 + 0.5 - 1.0 / std::min(2.0, p); }

    /// Throws unless min(s1,s2) >= max(1/p, 1/2), p,q >= 1, radius > 0.
    void validate() const;

    static BesovSpec from(const NominalSmoothness& n) { return {n.s1, n.s2, n.p, n.q, n.radius}; }
};

enum class RateRegime { DenseSpace, DenseTime, Sparse };

std::string to_string(RateRegime r);

struct RegimeResult {
    RateRegime regime = RateRegime::DenseTime;
    double exponent = 0.0;        // Theorem-2 rate exponent in (0,1)
    double lower_exponent = 0.0;  // Theorem-1 exponent
    double log_power = 0.0;       // power of ln(MN) in the upper bound
    bool xi1 = false;
    bool xi2 = false;
};

/// Three-case regime selection with the boundary flags. The sparse lower bound
/// uses s1*; the upper bound uses s1'.
RegimeResult theoretical_exponent(const BesovSpec& besov, double nu);

/// (1/(NM)) sum (f_hat - f)^2: the rectangle-rule squared L2([0,1]^2) distance.
double empirical_risk(const Grid& f_hat, const Grid& f_true);

struct RiskStats {
    double mean = 0.0;
    double se = 0.0;
    std::vector<double> per_replicate;
};

/// Mean empirical risk of the thresholding estimator over replicate-indexed
/// simulations. Thread-parallel over replicates; results are bit-identical to
/// the serial order for any thread count.
RiskStats monte_carlo_risk(const TestFunction& f, const KernelSpec& kernel, const NoiseSpec& noise,
                           int n, int m, const EstimatorParams& params, int replicates,
                           int threads = 1);

struct LadderPoint {
    int m = 0;
    int n = 0;
    double alpha_star = 1.0;
    double risk = 0.0;
    double se = 0.0;
};

struct FitResult {
    double slope = 0.0;   // sign-flipped: positive values compare to rate exponents
    double stderr_ = 0.0;
};

/// OLS of ln(risk) on ln(M N^{alpha*}); returns -slope and its standard error.
FitResult rate_fit(const std::vector<LadderPoint>& ladder);

struct ExperimentPlan {
    std::string function = "smooth";
    KernelSpec kernel;
    NoiseGenerator generator = NoiseGenerator::Fgn;
    std::vector<double> alphas;      // homogeneous profile if size 1
    double sigma = 1.0;
    std::vector<std::pair<int, int>> ladder;  // (M, N)
    int replicates = 50;
    std::optional<double> rho;       // nullopt = "auto" via calibrate_rho
    bool log_deflate = true;
    std::uint64_t seed = 0;
};

struct RateReport {
    RegimeResult regime;
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    double rho_used = 0.0;
    bool log_deflated = true;
    std::vector<LadderPoint> ladder;
};

/// Runs the full Monte Carlo ladder, fits the rate (log-deflated by default
/// with the regime's known power), and writes risks.csv / report.csv /
/// plot-data files into outdir (empty path = no files).
RateReport run_experiment(const ExperimentPlan& plan, const std::filesystem::path& outdir,
                          int threads = 1);

}  // namespace fdec
