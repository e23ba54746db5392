#include "sigcast/regress.hpp"

#include <cmath>
#include <stdexcept>

namespace sigcast {

Regularize parse_regularize(const std::string& name) {
    if (name == "elastic_net" || name == "elasticnet") return Regularize::ElasticNet;
    if (name == "l1") return Regularize::L1;
    if (name == "l2") return Regularize::L2;
    if (name == "none") return Regularize::None;
    throw std::invalid_argument("unknown regularize: " + name);
}

double PenaltySpec::effective_gamma() const {
    return regularize == Regularize::None ? 0.0 : gamma;
}

double PenaltySpec::effective_l1_ratio() const {
    switch (regularize) {
        case Regularize::L1: return 1.0;
        case Regularize::L2: return 0.0;
        case Regularize::None: return 0.0;
        case Regularize::ElasticNet: return l1_ratio;
    }
    return l1_ratio;
}

namespace {

bool is_pure_time(const Word& w, int time_channel) {
    for (int letter : w.letters)
        if (letter != time_channel) return false;
    return true;
}

} // namespace

std::vector<std::string> design_column_names(const DesignRecipe& recipe, const TermSelection& sel,
                                             const std::vector<std::string>& channel_names) {
    std::vector<std::string> names;
    for (const auto& w : sel.words) names.push_back("S(" + word_to_string(w, channel_names) + ")");
    if (recipe.use_multiplier) {
        for (const auto& w : sel.words)
            if (recipe.multiplier_all_words || is_pure_time(w, recipe.time_channel))
                names.push_back("yprev*S(" + word_to_string(w, channel_names) + ")");
    }
    if (recipe.use_prev_value) names.push_back("yprev");
    return names;
}

Eigen::VectorXd build_design_row(const TruncatedSignature& sig, double prev_target, const DesignRecipe& recipe,
                                 const TermSelection& sel) {
    if ((recipe.use_prev_value || recipe.use_multiplier) && !std::isfinite(prev_target))
        throw std::invalid_argument("build_design_row: prev_target required but unavailable");
    Eigen::VectorXd psi = filter_terms(sig, sel);
    std::vector<double> extra;
    if (recipe.use_multiplier) {
        for (std::size_t i = 0; i < sel.words.size(); ++i)
            if (recipe.multiplier_all_words || is_pure_time(sel.words[i], recipe.time_channel))
                extra.push_back(prev_target * psi[static_cast<Eigen::Index>(i)]);
    }
    if (recipe.use_prev_value) extra.push_back(prev_target);
    Eigen::VectorXd row(psi.size() + static_cast<Eigen::Index>(extra.size()));
    row.head(psi.size()) = psi;
    for (std::size_t i = 0; i < extra.size(); ++i) row[psi.size() + static_cast<Eigen::Index>(i)] = extra[i];
    return row;
}

double elastic_net_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                             double intercept, const PenaltySpec& penalty) {
    const double g = penalty.effective_gamma();
    const double l = penalty.effective_l1_ratio();
    const double n = static_cast<double>(X.rows());
    double sse = (y - X * beta - Eigen::VectorXd::Constant(X.rows(), intercept)).squaredNorm();
    return sse / n + g * l * beta.lpNorm<1>() + g * (1 - l) * beta.squaredNorm();
}

FitResult fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const PenaltySpec& penalty, bool fit_intercept) {
    if (X.rows() != y.size() || X.rows() < 1) throw std::invalid_argument("fit: row/target length mismatch");
    if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("fit: non-finite inputs");
    if (penalty.gamma < 0) throw std::invalid_argument("fit: gamma must be >= 0");
    if (penalty.l1_ratio < 0 || penalty.l1_ratio > 1) throw std::invalid_argument("fit: l1_ratio must be in [0,1]");

    const Eigen::Index n = X.rows(), p = X.cols();
    const double g = penalty.effective_gamma();
    const double l = penalty.effective_l1_ratio();
    const double l1 = g * l, l2 = g * (1 - l);

    FitResult res;
    res.coefficients.setZero(p);
    res.intercept = 0;

    Eigen::VectorXd col_sq(p);
    for (Eigen::Index j = 0; j < p; ++j) col_sq[j] = X.col(j).squaredNorm();
    Eigen::VectorXd r = y; // residual y - X b - b0

    constexpr double kTol = 1e-8;
    constexpr int kMaxSweeps = 100000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0;
        if (fit_intercept) {
            double shift = r.mean();
            res.intercept += shift;
            r.array() -= shift;
            max_change = std::max(max_change, std::abs(shift));
        }
        for (Eigen::Index j = 0; j < p; ++j) {
            const double old = res.coefficients[j];
            // z = (2/n) x_j . (r + x_j * old); denominator (2/n)|x_j|^2 + 2*l2
            const double z = (2.0 / static_cast<double>(n)) * (X.col(j).dot(r) + col_sq[j] * old);
            const double denom = (2.0 / static_cast<double>(n)) * col_sq[j] + 2.0 * l2;
            double bj = 0;
            if (denom > 0) {
                const double soft = std::abs(z) - l1;
                bj = soft > 0 ? std::copysign(soft, z) / denom : 0.0;
            }
            if (bj != old) {
                r += X.col(j) * (old - bj);
                res.coefficients[j] = bj;
                max_change = std::max(max_change, std::abs(bj - old));
            }
        }
        res.sweeps = sweep + 1;
        if (max_change < kTol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double SigRegressionModel::predict_row(const Eigen::VectorXd& raw_design_row) const {
    if (raw_design_row.size() != coefficients.size())
        throw std::invalid_argument("predict: design row width mismatch");
    return intercept + coefficients.dot(standardizer.apply_row(raw_design_row));
}

double SigRegressionModel::predict(const TruncatedSignature& sig, double prev_target) const {
    return predict_row(build_design_row(sig, prev_target, recipe, selection));
}

SigRegressionModel fit_sig_regression(const std::vector<TruncatedSignature>& sigs,
                                      const std::vector<double>& prev_targets, const Eigen::VectorXd& y,
                                      const DesignRecipe& recipe, const PenaltySpec& penalty, bool standardize) {
    if (sigs.empty() || sigs.size() != static_cast<std::size_t>(y.size()))
        throw std::invalid_argument("fit_sig_regression: sample count mismatch");
    SigRegressionModel model;
    model.recipe = recipe;
    model.selection = select_terms(sigs.front().dim, recipe.level, recipe.keep_sigs, recipe.time_channel, recipe.t_level);

    Eigen::MatrixXd X;
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        double prev = prev_targets.empty() ? std::nan("") : prev_targets[i];
        Eigen::VectorXd row = build_design_row(sigs[i], prev, recipe, model.selection);
        if (X.size() == 0) X.resize(static_cast<Eigen::Index>(sigs.size()), row.size());
        X.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }

    if (standardize && X.rows() >= 2) {
        model.standardizer = fit_standardizer(X);
    } else {
        model.standardizer.mean = Eigen::VectorXd::Zero(X.cols());
        model.standardizer.scale = Eigen::VectorXd::Ones(X.cols());
    }
    FitResult f = fit(model.standardizer.apply(X), y, penalty, recipe.fit_intercept);
    model.coefficients = f.coefficients;
    model.intercept = f.intercept;
    return model;
}

Ar1Fit fit_ar1(const std::vector<double>& y) {
    if (y.size() < 3) throw std::invalid_argument("fit_ar1: need at least 3 observations");
    const std::size_t n = y.size() - 1;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += y[i];
        my += y[i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (y[i] - mx) * (y[i] - mx);
        sxy += (y[i] - mx) * (y[i + 1] - my);
    }
    Ar1Fit f;
    if (sxx == 0) {
        f.degenerate = true;
        f.slope = 0;
        f.intercept = my;
    } else {
        f.slope = sxy / sxx;
        f.intercept = my - f.slope * mx;
    }
    return f;
}

} // namespace sigcast
