#include "sigcast/simlab.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "sigcast/filters.hpp"

#include <nlohmann/json.hpp>

namespace sigcast {

namespace {

std::mt19937_64 path_rng(std::uint64_t seed, int path_id, std::uint32_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path_id), salt};
    return std::mt19937_64(seq);
}

Path make_observation_path(const std::vector<double>& times, const std::vector<double>& x) {
    Path p;
    p.times = times;
    p.channel_names = {"t", "x"};
    p.values.resize(static_cast<Eigen::Index>(times.size()), 2);
    for (std::size_t i = 0; i < times.size(); ++i) {
        p.values(static_cast<Eigen::Index>(i), 0) = times[i];
        p.values(static_cast<Eigen::Index>(i), 1) = x[i];
    }
    return p;
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

} // namespace

void SimConfig::validate() const {
    if (dt <= 0) throw std::invalid_argument("SimConfig: dt must be positive");
    if (keep_fraction <= 0 || keep_fraction > 1) throw std::invalid_argument("SimConfig: keep_fraction in (0,1]");
    if (n_train <= 0 || n_train >= n_paths) throw std::invalid_argument("SimConfig: need 0 < n_train < n_paths");
    if (t_level > level) throw std::invalid_argument("SimConfig: t_level exceeds level");
}

SimConfig regime_config(const std::string& regime) {
    SimConfig c;
    if (regime == "regular") return c;
    if (regime == "subsampled") {
        c.keep_fraction = 0.2;
        return c;
    }
    if (regime == "sigmoid" || regime == "sigmoid-subsampled") {
        c.transform = Transform::Sigmoid;
        c.level = 3;
        c.t_level = 3;
        c.keep_sigs = KeepMode::All;
        if (regime == "sigmoid-subsampled") c.keep_fraction = 0.2;
        return c;
    }
    throw std::invalid_argument("unknown regime: " + regime);
}

SimPath simulate_pair(const SimConfig& config, int path_id) {
    auto rng = path_rng(config.seed, path_id, 0x51u);
    std::uniform_real_distribution<double> unif(config.t_min, config.t_max);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double T = unif(rng);
    const int steps = static_cast<int>(std::floor(T / config.dt + 1e-12)); // terminal time rounded down to the grid
    SimPath p;
    p.times.reserve(static_cast<std::size_t>(steps) + 1);
    p.y.reserve(static_cast<std::size_t>(steps) + 1);
    p.x.reserve(static_cast<std::size_t>(steps) + 1);
    double y = config.y0, x = 0.0;
    p.times.push_back(0.0);
    p.y.push_back(y);
    p.x.push_back(x);
    const double sig_sqdt = std::sqrt(config.sigma2 * config.dt);
    const double sqdt = std::sqrt(config.dt);
    for (int k = 1; k <= steps; ++k) {
        const double zeta = gauss(rng), xi = gauss(rng);
        x = x + (config.H * y + config.h) * config.dt + sqdt * xi;
        y = y + (config.F * y + config.f) * config.dt + sig_sqdt * zeta;
        p.times.push_back(static_cast<double>(k) * config.dt);
        p.y.push_back(y);
        p.x.push_back(x);
    }
    return p;
}

SimPath subsample(const SimPath& path, double keep_fraction, std::uint64_t seed, int path_id) {
    if (keep_fraction <= 0 || keep_fraction > 1) throw std::invalid_argument("subsample: keep_fraction in (0,1]");
    if (keep_fraction == 1.0) return path;
    auto rng = path_rng(seed, path_id, 0xd0u);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SimPath out;
    const std::size_t n = path.times.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool endpoint = (i == 0 || i + 1 == n);
        if (endpoint || unif(rng) < keep_fraction) {
            out.times.push_back(path.times[i]);
            out.y.push_back(path.y[i]);
            out.x.push_back(path.x[i]);
        }
    }
    if (out.times.size() < 2) throw std::runtime_error("subsample: fewer than 2 surviving points");
    return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> sigmoid_transform(const std::vector<double>& x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) out.push_back(sigmoid(v));
    return out;
}

double inverse_sigmoid_derivative(double xbar) {
    if (!(xbar > 0.0 && xbar < 1.0))
        throw std::invalid_argument("inverse_sigmoid_derivative: value must lie strictly in (0,1)");
    return 1.0 / (xbar * (1.0 - xbar));
}

std::vector<double> observation_increments(const std::vector<double>& x, Transform transform) {
    std::vector<double> inc;
    inc.reserve(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] - x[i - 1];
        if (transform == Transform::Sigmoid) d *= inverse_sigmoid_derivative(x[i]);
        inc.push_back(d);
    }
    return inc;
}

LinFit residual_regression(const std::vector<double>& res_a, const std::vector<double>& res_b) {
    if (res_a.size() != res_b.size() || res_a.size() < 3)
        throw std::invalid_argument("residual_regression: need equal lengths >= 3");
    const double ma = mean_of(res_a), mb = mean_of(res_b);
    double saa = 0, sab = 0, sbb = 0;
    for (std::size_t i = 0; i < res_a.size(); ++i) {
        saa += (res_a[i] - ma) * (res_a[i] - ma);
        sab += (res_a[i] - ma) * (res_b[i] - mb);
        sbb += (res_b[i] - mb) * (res_b[i] - mb);
    }
    if (saa == 0) throw std::invalid_argument("residual_regression: zero-variance regressor");
    LinFit f;
    f.slope = sab / saa;
    f.intercept = mb - f.slope * ma;
    f.r_squared = sbb == 0 ? 1.0 : (sab * sab) / (saa * sbb);
    return f;
}

RegimeResult run_regime(const SimConfig& config) {
    config.validate();

    std::vector<TruncatedSignature> train_sigs, test_sigs;
    Eigen::VectorXd train_y(config.n_train);
    std::vector<double> test_y, kf_pred;

    for (int id = 0; id < config.n_paths; ++id) {
        SimPath path = simulate_pair(config, id);
        if (config.keep_fraction < 1.0) path = subsample(path, config.keep_fraction, config.seed, id);
        std::vector<double> obs = config.transform == Transform::Sigmoid ? sigmoid_transform(path.x) : path.x;

        TruncatedSignature sig = signature(make_observation_path(path.times, obs), config.level);
        const double yT = path.y.back();
        if (id < config.n_train) {
            train_sigs.push_back(std::move(sig));
            train_y[id] = yT;
        } else {
            test_sigs.push_back(std::move(sig));
            test_y.push_back(yT);
            auto kf = kalman_bucy_scalar(config.F, config.H, config.sigma2, config.y0, path.times,
                                         observation_increments(obs, config.transform));
            kf_pred.push_back(kf.back());
        }
    }

    DesignRecipe recipe;
    recipe.keep_sigs = config.keep_sigs;
    recipe.level = config.level;
    recipe.t_level = config.t_level;
    recipe.use_prev_value = false; // y0 is a known constant, absorbed by the pure-time block
    recipe.use_multiplier = false;
    recipe.fit_intercept = true;
    recipe.time_channel = 0;

    RegimeResult result;
    result.config = config;
    result.model = fit_sig_regression(train_sigs, {}, train_y, recipe, config.penalty, true);
    result.model.column_names = design_column_names(recipe, result.model.selection, {"t", "x"});

    ResidualReport& rep = result.report;
    rep.n_test = static_cast<int>(test_sigs.size());
    for (std::size_t i = 0; i < test_sigs.size(); ++i) {
        rep.sig_residuals.push_back(result.model.predict(test_sigs[i], std::nan("")) - test_y[i]);
        rep.kf_residuals.push_back(kf_pred[i] - test_y[i]);
    }
    rep.kf_mean = mean_of(rep.kf_residuals);
    rep.kf_var = var_of(rep.kf_residuals);
    rep.sig_mean = mean_of(rep.sig_residuals);
    rep.sig_var = var_of(rep.sig_residuals);
    LinFit fit = residual_regression(rep.kf_residuals, rep.sig_residuals);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.r_squared = fit.r_squared;
    return result;
}

std::vector<CoefficientDiff> compare_coefficients(const SigRegressionModel& model, double y0, double a) {
    if (model.recipe.keep_sigs != KeepMode::Innermost)
        throw std::invalid_argument("compare_coefficients: model must use the innermost-linear recipe");
    std::vector<CoefficientDiff> out;
    const auto& sel = model.selection;
    for (std::size_t i = 0; i < sel.words.size(); ++i) {
        const Word& w = sel.words[i];
        bool pure_time = true;
        for (int letter : w.letters) pure_time = pure_time && (letter == model.recipe.time_channel);
        CoefficientDiff d;
        d.word = word_to_string(w, {"t", "x"});
        d.pure_time = pure_time;
        const int n = w.level();
        d.theoretical = pure_time ? y0 * std::pow(a, n) : std::pow(a, n - 1);
        // regression coefficients act on standardized features; map back
        d.fitted = model.coefficients[static_cast<Eigen::Index>(i)] /
                   model.standardizer.scale[static_cast<Eigen::Index>(i)];
        out.push_back(std::move(d));
    }
    return out;
}

void write_report_json(const std::string& path, const std::string& regime, const ResidualReport& report) {
    nlohmann::json j;
    j["regime"] = regime;
    j["n_test"] = report.n_test;
    j["kf_residual_mean"] = report.kf_mean;
    j["kf_residual_variance"] = report.kf_var;
    j["sig_residual_mean"] = report.sig_mean;
    j["sig_residual_variance"] = report.sig_var;
    j["slope"] = report.slope;
    j["intercept"] = report.intercept;
    j["r_squared"] = report.r_squared;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << '\n';
}

void write_residual_pairs_csv(const std::string& path, const ResidualReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write residual pairs: " + path);
    out << "kf_residual,sig_residual\n";
    out.precision(17);
    for (std::size_t i = 0; i < report.kf_residuals.size(); ++i)
        out << report.kf_residuals[i] << ',' << report.sig_residuals[i] << '\n';
}

TimeSeriesFrame synthetic_nowcast_frame(std::uint64_t seed, int n_days) {
    auto rng = path_rng(seed, 0, 0xbe9cu);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double theta = 0.08; // daily mean reversion of the latent state
    const double vol = 0.4;
    const double obs_gain = 4.0;

    TimeSeriesFrame frame;
    frame.columns = {"indicator", "target"};
    frame.target_column = "target";
    frame.target_lag = 2; // weekly value published two days after reference
    frame.dated = true;
    frame.timestamps.resize(static_cast<std::size_t>(n_days));
    frame.values.resize(n_days, 2);
    frame.values.setConstant(std::nan(""));

    const double start = parse_date("2019-01-07"); // a Monday
    double y = 0.0, x = 0.0;
    for (int day = 0; day < n_days; ++day) {
        frame.timestamps[static_cast<std::size_t>(day)] = start + day;
        x += obs_gain * y + gauss(rng);
        frame.values(day, 0) = x;
        if (day % 7 == 0) frame.values(day, 1) = y; // weekly snapshot of the latent state
        y += -theta * y + vol * gauss(rng);
    }
    frame.validate();
    return frame;
}

} // namespace sigcast
