#include "sigcast/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcast {

FilterState kalman_init(const DiscreteKalmanParams& params) {
    FilterState s;
    s.t = 0;
    s.mean = params.mu0;
    s.cov = params.P0;
    return s;
}

FilterState kalman_step(const FilterState& state, const DiscreteKalmanParams& params, const Eigen::VectorXd& x_t) {
    const auto& A = params.A;
    const auto& C = params.C;
    FilterState next;
    next.t = state.t + 1;
    Eigen::VectorXd mu_pred = A * state.mean;
    Eigen::MatrixXd P_pred = A * state.cov * A.transpose() + params.Gamma;
    P_pred = 0.5 * (P_pred + P_pred.transpose().eval()); // keep symmetric
    next.innovation = x_t - C * mu_pred;
    next.innovation_var = C * P_pred * C.transpose() + params.Sigma;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(next.innovation_var);
    if (!lu.isInvertible()) throw std::runtime_error("kalman_step: singular innovation variance");
    next.gain = P_pred * C.transpose() * lu.inverse();
    next.mean = mu_pred + next.gain * next.innovation;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(P_pred.rows(), P_pred.cols());
    next.cov = (I - next.gain * C) * P_pred;
    next.cov = 0.5 * (next.cov + next.cov.transpose().eval());
    return next;
}

namespace {

Eigen::MatrixXd riccati_rhs(const KalmanBucyParams& p, const Eigen::MatrixXd& R) {
    return p.sigma * p.sigma.transpose() + p.F * R + R * p.F.transpose() -
           R * p.H.transpose() * p.H * R;
}

} // namespace

Eigen::MatrixXd riccati_steady_state(const KalmanBucyParams& params) {
    const int d = params.state_dim();
    if (d == 1 && params.H.size() == 1) {
        const double F = params.F(0, 0), H = params.H(0, 0);
        const double s2 = (params.sigma * params.sigma.transpose())(0, 0);
        if (H == 0) throw std::runtime_error("riccati_steady_state: H = 0 in scalar closed form");
        Eigen::MatrixXd R(1, 1);
        R(0, 0) = (F + std::sqrt(F * F + s2 * H * H)) / (H * H);
        return R;
    }
    // RK4 forward integration until the derivative vanishes
    Eigen::MatrixXd R = params.R0.size() ? params.R0 : Eigen::MatrixXd::Zero(d, d);
    const double dt = 1e-3;
    const long max_steps = 200000000L / std::max(1, d * d);
    for (long step = 0; step < max_steps; ++step) {
        Eigen::MatrixXd k1 = riccati_rhs(params, R);
        if (k1.cwiseAbs().maxCoeff() < 1e-12) return 0.5 * (R + R.transpose().eval());
        Eigen::MatrixXd k2 = riccati_rhs(params, R + 0.5 * dt * k1);
        Eigen::MatrixXd k3 = riccati_rhs(params, R + 0.5 * dt * k2);
        Eigen::MatrixXd k4 = riccati_rhs(params, R + dt * k3);
        R += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    throw std::runtime_error("riccati_steady_state: no convergence within iteration bound");
}

std::vector<Eigen::VectorXd> kalman_bucy_discrete(const KalmanBucyParams& params, const std::vector<double>& times,
                                                  const Eigen::MatrixXd& observations, const KalmanBucyOptions& opts) {
    const int n = static_cast<int>(observations.rows());
    if (n < 2) throw std::invalid_argument("kalman_bucy_discrete: need at least 2 observations");
    if (times.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("kalman_bucy_discrete: time/observation mismatch");
    for (int i = 1; i < n; ++i)
        if (!(times[static_cast<std::size_t>(i)] > times[static_cast<std::size_t>(i - 1)]))
            throw std::invalid_argument("kalman_bucy_discrete: non-increasing timestamps");

    Eigen::MatrixXd R = opts.steady_state_variance
                            ? riccati_steady_state(params)
                            : (params.R0.size() ? params.R0
                                                : Eigen::MatrixXd::Zero(params.state_dim(), params.state_dim()));
    Eigen::VectorXd y = opts.y0.size() ? opts.y0 : Eigen::VectorXd::Zero(params.state_dim());
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(n));
    out.push_back(y);
    for (int i = 1; i < n; ++i) {
        const double dt = times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(i - 1)];
        Eigen::VectorXd dx = (observations.row(i) - observations.row(i - 1)).transpose();
        Eigen::VectorXd innovation = dx - (params.H * y + params.h) * dt;
        if (!opts.steady_state_variance) R += riccati_rhs(params, R) * dt;
        y = y + (params.F * y + params.f) * dt + R * params.H.transpose() * innovation;
        out.push_back(y);
    }
    return out;
}

std::vector<double> kalman_bucy_scalar(double F, double H, double sigma2, double y0, const std::vector<double>& times,
                                       const std::vector<double>& x_increments) {
    if (x_increments.size() + 1 != times.size())
        throw std::invalid_argument("kalman_bucy_scalar: need one increment per step");
    const double R = (F + std::sqrt(F * F + sigma2 * H * H)) / (H * H);
    const double a = F - R * H * H;
    std::vector<double> out;
    out.reserve(times.size());
    double y = y0;
    out.push_back(y);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (!(dt > 0)) throw std::invalid_argument("kalman_bucy_scalar: non-increasing timestamps");
        y = y + a * y * dt + R * H * x_increments[i - 1];
        out.push_back(y);
    }
    return out;
}

double signature_filter_expansion(double y0, const TruncatedSignature& sig, double a, int N, int time_channel,
                                  int data_channel) {
    if (sig.level < N + 1) throw std::invalid_argument("signature_filter_expansion: signature level must be >= N+1");
    double yhat = y0; // n = 0 term: a^0 * S^0 = 1
    double a_pow = 1.0;
    for (int n = 1; n <= N; ++n) {
        a_pow *= a;
        Word tt;
        tt.letters.assign(static_cast<std::size_t>(n), time_channel);
        yhat += y0 * a_pow * sig.coeff(tt);
    }
    a_pow = 1.0;
    for (int n = 1; n <= N + 1; ++n) {
        Word xt;
        xt.letters.assign(static_cast<std::size_t>(n), time_channel);
        xt.letters[0] = data_channel; // observation integral is the innermost one
        yhat += a_pow * sig.coeff(xt);
        a_pow *= a;
    }
    return yhat;
}

} // namespace sigcast
