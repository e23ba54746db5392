#ifndef SIGCAST_SIMLAB_HPP
#define SIGCAST_SIMLAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigcast/regress.hpp"
#include "sigcast/signature.hpp"
#include "sigcast/timeseries.hpp"

namespace sigcast {

enum class Transform { None, Sigmoid };

struct SimConfig {
    double F = -1.0;
    double H = 10.0;
    double sigma2 = 2.0;
    double f = 0.0;
    double h = 0.0;
    double y0 = 0.1;
    double dt = 0.005;
    double t_min = 0.1, t_max = 1.0; // terminal time ~ Uniform[t_min, t_max], rounded down to the grid
    int n_paths = 1000;
    int n_train = 800;
    double keep_fraction = 1.0; // 1 = regularly sampled
    Transform transform = Transform::None;
    int level = 6;   // signature truncation for the regression features
    int t_level = 6;
    KeepMode keep_sigs = KeepMode::Innermost;
    PenaltySpec penalty{Regularize::None, 0.0, 0.0};
    std::uint64_t seed = 20260192;

    void validate() const;
};

// Named regime presets matching the simulation study.
SimConfig regime_config(const std::string& regime); // regular | subsampled | sigmoid | sigmoid-subsampled

struct SimPath {
    std::vector<double> times;
    std::vector<double> y; // hidden state on the same grid
    std::vector<double> x; // observations, x[0] = 0
};

// Euler-Maruyama on the fixed grid with a per-path seeded stream:
//   Y_{k+1} = Y_k + F Y_k dt + sqrt(sigma2 dt) zeta_k
//   X_{k+1} = X_k + H Y_k dt + sqrt(dt) xi_k
SimPath simulate_pair(const SimConfig& config, int path_id);

// Random subset of interior grid points; first and last points always
// kept, timestamps preserved. Deterministic for a fixed (seed, path_id).
SimPath subsample(const SimPath& path, double keep_fraction, std::uint64_t seed, int path_id);

double sigmoid(double x);
std::vector<double> sigmoid_transform(const std::vector<double>& x);

// dg^{-1}/dxbar = 1 / (xbar (1 - xbar)); filter increments use
// gbar(xbar_{k+1}) * (xbar_{k+1} - xbar_k) in place of dX (gbar aligned
// with the incoming observation, diff-style).
double inverse_sigmoid_derivative(double xbar);
std::vector<double> observation_increments(const std::vector<double>& x, Transform transform);

struct ResidualReport {
    double kf_mean = 0, kf_var = 0;
    double sig_mean = 0, sig_var = 0;
    double slope = 0, intercept = 0, r_squared = 0;
    int n_test = 0;
    std::vector<double> kf_residuals;  // per test path, in path order
    std::vector<double> sig_residuals;
};

struct LinFit {
    double slope = 0, intercept = 0, r_squared = 0;
};
// Simple least squares of res_b on res_a.
LinFit residual_regression(const std::vector<double>& res_a, const std::vector<double>& res_b);

struct RegimeResult {
    ResidualReport report;
    SigRegressionModel model;
    SimConfig config;
};

// Full experiment: simulate n_paths, fit the signature regression of the
// terminal hidden state on the train split, run the steady-state filter
// on the test split, and compare residuals.
RegimeResult run_regime(const SimConfig& config);

struct CoefficientDiff {
    std::string word;
    double fitted = 0;      // de-standardized regression coefficient
    double theoretical = 0; // y0 a^n for pure-time words, a^{n-1} for (x,t..t)
    bool pure_time = false;

    double diff() const { return fitted - theoretical; }
};

// Per-word differences between the fitted innermost-linear coefficients
// (mapped back to the unstandardized feature scale) and the analytic
// steady-state expansion coefficients with decay constant a.
std::vector<CoefficientDiff> compare_coefficients(const SigRegressionModel& model, double y0, double a);

void write_report_json(const std::string& path, const std::string& regime, const ResidualReport& report);
void write_residual_pairs_csv(const std::string& path, const ResidualReport& report);

// Bundled synthetic nowcast benchmark: a weekly target (snapshots of a
// slowly mean-reverting latent state) driven by a daily cumulative
// indicator, with a 2-day publication lag on the target.
TimeSeriesFrame synthetic_nowcast_frame(std::uint64_t seed, int n_days = 1100);

} // namespace sigcast

#endif
