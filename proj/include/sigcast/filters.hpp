#ifndef SIGCAST_FILTERS_HPP
#define SIGCAST_FILTERS_HPP

#include <vector>

#include <Eigen/Dense>

#include "sigcast/signature.hpp"

namespace sigcast {

// Y_t = A Y_{t-1} + W_t,  X_t = C Y_t + V_t, W ~ N(0, Gamma), V ~ N(0, Sigma).
struct DiscreteKalmanParams {
    Eigen::MatrixXd A, C, Gamma, Sigma;
    Eigen::VectorXd mu0;
    Eigen::MatrixXd P0;
};

struct FilterState {
    int t = 0;
    Eigen::VectorXd mean;       // mu_{t|t}
    Eigen::MatrixXd cov;        // P_{t|t}
    Eigen::VectorXd innovation; // eta_t
    Eigen::MatrixXd innovation_var;
    Eigen::MatrixXd gain;
};

FilterState kalman_init(const DiscreteKalmanParams& params);
FilterState kalman_step(const FilterState& state, const DiscreteKalmanParams& params, const Eigen::VectorXd& x_t);

// dY = (F Y + f)dt + sigma dV,  dX = (H Y + h)dt + dW (constant coefficients).
struct KalmanBucyParams {
    Eigen::MatrixXd F, sigma, H;
    Eigen::VectorXd f, h;
    Eigen::MatrixXd R0;

    int state_dim() const { return static_cast<int>(F.rows()); }
};

// Solves sigma sigma^T + F R + R F^T - R H^T H R = 0. Scalar problems
// use the closed form (F + sqrt(F^2 + sigma^2 H^2)) / H^2; matrices are
// integrated forward until ||dR/dt|| < 1e-12.
Eigen::MatrixXd riccati_steady_state(const KalmanBucyParams& params);

struct KalmanBucyOptions {
    bool steady_state_variance = true; // else integrate the Riccati equation alongside
    Eigen::VectorXd y0;                // initial filter mean
};

// Euler discretization of the filter SDE over the observation path
// (channel layout: observations only, no time channel; per-step dt comes
// from the path timestamps, so irregular gaps are handled naturally).
// Returns the filter mean after each observation, starting with y0.
std::vector<Eigen::VectorXd> kalman_bucy_discrete(const KalmanBucyParams& params, const std::vector<double>& times,
                                                  const Eigen::MatrixXd& observations, const KalmanBucyOptions& opts);

// Scalar steady-state convenience: Yhat_{k+1} = Yhat_k + a Yhat_k dt + R H dX,
// with a = F - R H^2.
std::vector<double> kalman_bucy_scalar(double F, double H, double sigma2, double y0, const std::vector<double>& times,
                                       const std::vector<double>& x_increments);

// Truncated signature expansion of the steady-state scalar filter:
//   Yhat_t = y0 * sum_{n=0..N} a^n S^n(t..t) + sum_{n=1..N+1} a^{n-1} S^n(x t..t),
// where a is the filter decay constant and the signature is taken on the
// time-augmented observation path (time channel 0, data channel 1).
double signature_filter_expansion(double y0, const TruncatedSignature& sig, double a, int N, int time_channel = 0,
                                  int data_channel = 1);

} // namespace sigcast

#endif
