// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line with the measured values; the process exits nonzero if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sigcast/filters.hpp"
#include "sigcast/pipeline.hpp"
#include "sigcast/regress.hpp"
#include "sigcast/signature.hpp"
#include "sigcast/simlab.hpp"
#include "oracles.hpp"

using namespace sigcast;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion-%d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++failures;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

// ---- criteria 1-4: the four simulation regimes ------------------------------

RegimeResult regular_result; // reused by criterion 7

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    regular_result = run_regime(regime_config("regular"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const ResidualReport& r = regular_result.report;
    bool pass = in_range(r.kf_mean, -0.01, 0.05) && in_range(r.sig_mean, -0.01, 0.05) &&
                in_range(r.kf_var, 0.07, 0.17) && in_range(r.sig_var, 0.09, 0.19) &&
                in_range(r.slope, 0.95, 1.05) && in_range(r.intercept, -0.06, 0.02) && r.r_squared >= 0.95 &&
                secs < 120.0;
    report(1, pass,
           "regular regime: kf_mean=" + fmt(r.kf_mean) + " kf_var=" + fmt(r.kf_var) + " sig_mean=" + fmt(r.sig_mean) +
               " sig_var=" + fmt(r.sig_var) + " slope=" + fmt(r.slope) + " intercept=" + fmt(r.intercept) +
               " r2=" + fmt(r.r_squared) + " runtime=" + fmt(secs) + "s");
}

void criterion_2() {
    const ResidualReport r = run_regime(regime_config("subsampled")).report;
    bool pass = in_range(r.slope, 0.85, 1.00) && r.r_squared >= 0.88 && in_range(r.kf_var, 0.08, 0.18) &&
                in_range(r.sig_var, 0.09, 0.19);
    report(2, pass,
           "subsampled regime: slope=" + fmt(r.slope) + " r2=" + fmt(r.r_squared) + " kf_var=" + fmt(r.kf_var) +
               " sig_var=" + fmt(r.sig_var));
}

void criterion_3() {
    const ResidualReport r = run_regime(regime_config("sigmoid")).report;
    bool pass = in_range(r.slope, 0.75, 0.95) && in_range(r.r_squared, 0.35, 0.65) && in_range(r.sig_var, 0.14, 0.28);
    report(3, pass,
           "sigmoid regime: slope=" + fmt(r.slope) + " r2=" + fmt(r.r_squared) + " sig_var=" + fmt(r.sig_var));
}

void criterion_4() {
    const ResidualReport r = run_regime(regime_config("sigmoid-subsampled")).report;
    // filter breakdown: low R^2 while the signature stays at least competitive
    // with the filter's reference variance of 0.29
    bool pass = r.r_squared <= 0.25 && r.sig_var <= 1.1 * 0.29;
    report(4, pass,
           "sigmoid-subsampled regime: r2=" + fmt(r.r_squared) + " sig_var=" + fmt(r.sig_var) +
               " kf_var=" + fmt(r.kf_var) + " (sig_var bound 0.319)");
}

// ---- criterion 5: bundled nowcast benchmark vs AR(1) -----------------------

void criterion_5() {
    try {
        auto frame = read_csv(std::string(SOURCE_DIR) + "/data/synthetic_nowcast.csv");
        auto cfg = parse_config_file(std::string(SOURCE_DIR) + "/configs/synthetic.cfg");
        auto run = run_nowcast(frame, cfg);
        auto ev = evaluate(run);
        auto base = run_ar1_baseline(frame, cfg.target, cfg.target_lag, run.config.test_start, run.config.test_start,
                                     run.config.test_end);
        auto base_ev = evaluate_points(base.points, run.releases, cfg.target_lag);
        bool pass = ev.rmse < base_ev.rmse;
        report(5, pass,
               "synthetic benchmark: pipeline_rmse=" + fmt(ev.rmse) + " (n=" + std::to_string(ev.n) +
                   ") ar1_rmse=" + fmt(base_ev.rmse) + " (n=" + std::to_string(base_ev.n) + ")");
    } catch (const std::exception& e) {
        report(5, false, std::string("synthetic benchmark failed: ") + e.what());
    }
}

// ---- criterion 6: property suite --------------------------------------------

bool chen_consistency() {
    Path p = oracles::random_path(9, 3, 99);
    auto whole = signature(p, 4);
    for (int cut : {2, 5}) {
        Path a, b;
        a.times.assign(p.times.begin(), p.times.begin() + cut + 1);
        a.values = p.values.topRows(cut + 1);
        b.times.assign(p.times.begin() + cut, p.times.end());
        b.values = p.values.bottomRows(p.points() - cut);
        auto glued = chen_product(signature(a, 4), signature(b, 4));
        if ((glued.coeffs - whole.coeffs).cwiseAbs().maxCoeff() >
            1e-12 * std::max(1.0, whole.coeffs.cwiseAbs().maxCoeff()))
            return false;
    }
    return true;
}

bool invariances() {
    Path p = oracles::random_path(6, 2, 5);
    auto base = signature(p, 4);
    Path q; // redundant collinear midpoint
    q.values.resize(p.points() + 1, 2);
    q.values.topRows(3) = p.values.topRows(3);
    q.values.row(3) = 0.5 * (p.values.row(2) + p.values.row(3));
    q.values.bottomRows(p.points() - 3) = p.values.bottomRows(p.points() - 3);
    for (int i = 0; i <= p.points(); ++i) q.times.push_back(i);
    if ((signature(q, 4).coeffs - base.coeffs).cwiseAbs().maxCoeff() > 1e-12) return false;
    Path shifted = p;
    shifted.values.col(0).array() += 17.5;
    shifted.values.col(1).array() -= 3.25;
    return (signature(shifted, 4).coeffs - base.coeffs).cwiseAbs().maxCoeff() <= 1e-12;
}

bool factorial_decay() {
    Path p = oracles::random_path(7, 3, 11);
    const double V = oracles::one_variation(p);
    auto sig = signature(p, 5);
    double fact = 1;
    for (int k = 1; k <= 5; ++k) {
        fact *= k;
        std::size_t off = level_offset(3, k);
        std::size_t len = term_count(3, k) - off;
        double mx = sig.coeffs.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(len))
                        .cwiseAbs()
                        .maxCoeff();
        if (mx > std::pow(V, k) / fact + 1e-12) return false;
    }
    return true;
}

bool shuffle_identity() {
    Path p = oracles::random_path(8, 3, 23);
    auto sig = signature(p, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double lhs = sig.coeff(Word{{i}}) * sig.coeff(Word{{j}});
            double rhs = sig.coeff(Word{{i, j}}) + sig.coeff(Word{{j, i}});
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs))) return false;
        }
    return true;
}

bool quadrature_oracle() {
    Path p = oracles::random_path(5, 3, 17);
    auto sig = signature(p, 3);
    for (std::size_t idx : {0u, 4u, 11u, 20u, 35u}) {
        Word w = word_at(3, idx);
        double q = oracles::quadrature_signature(p, w);
        if (std::abs(sig.coeffs[static_cast<Eigen::Index>(idx)] - q) > 1e-6 * std::max(1.0, std::abs(q)))
            return false;
    }
    return true;
}

bool kalman_vs_conditioning() {
    const double A = 0.9, C = 1.2, G = 0.5, S = 0.3, mu0 = 0.2, P0 = 1.0;
    DiscreteKalmanParams p;
    p.A = Eigen::MatrixXd::Constant(1, 1, A);
    p.C = Eigen::MatrixXd::Constant(1, 1, C);
    p.Gamma = Eigen::MatrixXd::Constant(1, 1, G);
    p.Sigma = Eigen::MatrixXd::Constant(1, 1, S);
    p.mu0 = Eigen::VectorXd::Constant(1, mu0);
    p.P0 = Eigen::MatrixXd::Constant(1, 1, P0);
    std::vector<double> obs{0.5, -0.3, 0.8};
    auto s = kalman_init(p);
    std::vector<double> seen;
    for (double x : obs) {
        seen.push_back(x);
        s = kalman_step(s, p, Eigen::VectorXd::Constant(1, x));
        auto post = oracles::scalar_kalman_oracle(A, C, G, S, mu0, P0, seen);
        if (std::abs(s.mean[0] - post.mean) > 1e-10 || std::abs(s.cov(0, 0) - post.var) > 1e-10) return false;
    }
    return true;
}

bool riccati_checks() {
    KalmanBucyParams ex4;
    ex4.F = Eigen::MatrixXd::Constant(1, 1, -1.0);
    ex4.H = Eigen::MatrixXd::Constant(1, 1, 1.0);
    ex4.sigma = Eigen::MatrixXd::Constant(1, 1, std::sqrt(3.0));
    ex4.f = Eigen::VectorXd::Zero(1);
    ex4.h = Eigen::VectorXd::Zero(1);
    if (std::abs(riccati_steady_state(ex4)(0, 0) - 1.0) > 1e-12) return false;

    KalmanBucyParams m;
    m.F.resize(2, 2);
    m.F << -1.0, 0.2, 0.0, -1.5;
    m.H = Eigen::MatrixXd::Identity(2, 2);
    m.sigma.resize(2, 2);
    m.sigma << 0.5, 0.0, 0.1, 0.3;
    m.f = Eigen::VectorXd::Zero(2);
    m.h = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd R = riccati_steady_state(m);
    Eigen::MatrixXd resid = m.sigma * m.sigma.transpose() + m.F * R + R * m.F.transpose() -
                            R * m.H.transpose() * m.H * R;
    return resid.cwiseAbs().maxCoeff() <= 1e-10;
}

bool expansion_monotone() {
    const double R = 1.0, a = -2.0, y0 = 0.3; // Example-4 parameters: F=-1, H=1, sigma^2=3
    const int n = 20;
    std::vector<double> times{0.0}, x{0.0};
    auto g = oracles::rng(33);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 1; i <= n; ++i) {
        times.push_back(0.2 * i / n);
        x.push_back(x.back() + 0.05 * gauss(g));
    }
    // exact solution of dY = aY dt + RH dX for the piecewise-linear driver
    double truth = y0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        const double slope = (x[i] - x[i - 1]) / dt;
        truth = std::exp(a * dt) * truth + R * slope * (std::exp(a * dt) - 1.0) / a;
    }
    Path p;
    p.times = times;
    p.values.resize(n + 1, 2);
    for (int i = 0; i <= n; ++i) {
        p.values(i, 0) = times[static_cast<std::size_t>(i)];
        p.values(i, 1) = x[static_cast<std::size_t>(i)];
    }
    auto sig = signature(p, 6);
    double prev = std::numeric_limits<double>::infinity();
    for (int N = 1; N <= 5; ++N) {
        double err = std::abs(signature_filter_expansion(y0, sig, a, N) - truth);
        if (err > prev + 1e-12) return false;
        prev = err;
    }
    return true;
}

bool ridge_closed_form_check() {
    auto g = oracles::rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(20, 5);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 5; ++j) X(i, j) = gauss(g);
        y[i] = X.row(i).sum() + 0.1 * gauss(g);
    }
    for (double gamma : {0.01, 1.0}) {
        auto f = fit(X, y, {Regularize::L2, gamma, 0.0}, true);
        auto [beta, b0] = oracles::ridge_closed_form(X, y, gamma, true);
        if ((f.coefficients - beta).cwiseAbs().maxCoeff() > 1e-8 || std::abs(f.intercept - b0) > 1e-8) return false;
    }
    return true;
}

bool objective_descent() {
    auto g = oracles::rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(25, 6);
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) {
        for (int j = 0; j < 6; ++j) X(i, j) = gauss(g);
        y[i] = gauss(g);
    }
    PenaltySpec pen{Regularize::ElasticNet, 0.3, 0.4};
    auto f = fit(X, y, pen, true);
    const double at_opt = elastic_net_objective(X, y, f.coefficients, f.intercept, pen);
    if (at_opt > elastic_net_objective(X, y, Eigen::VectorXd::Zero(6), 0.0, pen)) return false;
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::VectorXd b = f.coefficients;
        for (int j = 0; j < b.size(); ++j) b[j] += 0.01 * gauss(g);
        if (elastic_net_objective(X, y, b, f.intercept, pen) < at_opt - 1e-12) return false;
    }
    return true;
}

bool pipeline_no_leakage() {
    TimeSeriesFrame f;
    f.columns = {"ind", "y"};
    const int n = 120;
    f.timestamps.resize(n);
    f.values.resize(n, 2);
    f.values.setConstant(std::nan(""));
    auto g = oracles::rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double x = 0;
    for (int d = 0; d < n; ++d) {
        f.timestamps[static_cast<std::size_t>(d)] = d;
        x += gauss(g);
        f.values(d, 0) = x;
        if (d % 5 == 0) f.values(d, 1) = static_cast<double>(d);
    }
    auto cfg = parse_config("target = y\nlevel = 2\nregularize = none\nuse_prev_value = true\ntest_start = 100\n");
    const double now = 80.0;
    auto model = fit_model(f, cfg, now);
    const double pred = nowcast_at(model, f, now);
    TimeSeriesFrame tampered = f;
    for (int i = 0; i < n; ++i)
        if (f.timestamps[static_cast<std::size_t>(i)] > now) {
            tampered.values(i, 0) += 1000.0;
            if (!std::isnan(tampered.values(i, 1))) tampered.values(i, 1) -= 500.0;
        }
    auto model2 = fit_model(tampered, cfg, now);
    return nowcast_at(model2, tampered, now) == pred;
}

bool bit_determinism() {
    SimConfig c;
    c.n_paths = 40;
    c.n_train = 32;
    c.level = 3;
    c.t_level = 3;
    auto a = run_regime(c);
    auto b = run_regime(c);
    return a.report.kf_residuals == b.report.kf_residuals && a.report.sig_residuals == b.report.sig_residuals &&
           a.report.r_squared == b.report.r_squared;
}

void criterion_6() {
    struct Check {
        const char* name;
        bool (*fn)();
    };
    const Check checks[] = {
        {"chen", chen_consistency},       {"invariance", invariances},
        {"decay", factorial_decay},       {"shuffle", shuffle_identity},
        {"quadrature", quadrature_oracle}, {"kalman", kalman_vs_conditioning},
        {"riccati", riccati_checks},      {"expansion", expansion_monotone},
        {"ridge", ridge_closed_form_check}, {"descent", objective_descent},
        {"no-leakage", pipeline_no_leakage}, {"determinism", bit_determinism},
    };
    std::string detail = "properties:";
    bool pass = true;
    for (const auto& c : checks) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (...) {
        }
        detail += std::string(" ") + c.name + (ok ? "=ok" : "=FAIL");
        pass = pass && ok;
    }
    report(6, pass, detail);
}

// ---- criterion 7: coefficient comparison at two time-depths -----------------

void criterion_7() {
    const SimConfig& base = regular_result.config;
    const double R = (base.F + std::sqrt(base.F * base.F + base.sigma2 * base.H * base.H)) / (base.H * base.H);
    const double a = base.F - R * base.H * base.H;

    auto max_pure_time_diff = [&](const SigRegressionModel& model) {
        double mx = 0;
        for (const auto& d : compare_coefficients(model, base.y0, a))
            if (d.pure_time) mx = std::max(mx, std::abs(d.diff()));
        return mx;
    };
    const double deep = max_pure_time_diff(regular_result.model);

    SimConfig shallow_cfg = regime_config("regular");
    shallow_cfg.level = 3;
    shallow_cfg.t_level = 1;
    const double shallow = max_pure_time_diff(run_regime(shallow_cfg).model);

    bool pass = deep >= 10.0 * shallow;
    report(7, pass,
           "coefficient comparison: t_level=6 pure-time max diff=" + fmt(deep) +
               " vs t_level=1/level-3 diff=" + fmt(shallow) + " (need 10x)");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
