#ifndef SIGCAST_REGRESS_HPP
#define SIGCAST_REGRESS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigcast/signature.hpp"
#include "sigcast/timeseries.hpp"

namespace sigcast {

enum class Regularize { ElasticNet, L1, L2, None };

Regularize parse_regularize(const std::string& name);

struct PenaltySpec {
    Regularize regularize = Regularize::ElasticNet;
    double gamma = 0;    // strength, >= 0
    double l1_ratio = 0; // lambda in [0, 1]

    // Effective (gamma, lambda) after the regularize shorthand: l2 forces
    // lambda = 0, l1 forces lambda = 1, none forces gamma = 0.
    double effective_gamma() const;
    double effective_l1_ratio() const;
};

// How a design row is assembled from a signature, per the Appendix-B
// semantics: retained signature terms, optionally a prev_target
// interaction on the pure-time terms, optionally prev_target itself.
struct DesignRecipe {
    KeepMode keep_sigs = KeepMode::AllLinear;
    int level = 2;
    int t_level = 2;
    bool use_prev_value = false;
    bool use_multiplier = false;
    bool fit_intercept = true;
    // Escape hatch: interact prev_target with every retained word instead
    // of only the pure-time ones (the fully general formulation). Off by
    // default to match the reference configurations.
    bool multiplier_all_words = false;
    int time_channel = 0;
};

// Column labels for a design row under `recipe` and term selection `sel`.
std::vector<std::string> design_column_names(const DesignRecipe& recipe, const TermSelection& sel,
                                             const std::vector<std::string>& channel_names);

// row = [filtered signature terms] ++ [prev_target * pure-time terms] ++ [prev_target]
Eigen::VectorXd build_design_row(const TruncatedSignature& sig, double prev_target, const DesignRecipe& recipe,
                                 const TermSelection& sel);

struct FitResult {
    Eigen::VectorXd coefficients;
    double intercept = 0;
    int sweeps = 0;
    bool converged = false;
};

// Coordinate descent with soft-thresholding for
//   (1/n)||y - X b - b0||^2 + g*l*||b||_1 + g*(1-l)*||b||_2^2,
// intercept unpenalized. Fixed column sweep order; converges when the
// max coefficient change drops below 1e-8 (at most 1e5 sweeps).
FitResult fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const PenaltySpec& penalty, bool fit_intercept);

double elastic_net_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                             double intercept, const PenaltySpec& penalty);

struct SigRegressionModel {
    DesignRecipe recipe;
    TermSelection selection;
    std::vector<std::string> column_names;
    Standardizer standardizer;
    Eigen::VectorXd coefficients; // per standardized design column
    double intercept = 0;

    double predict(const TruncatedSignature& sig, double prev_target) const;
    double predict_row(const Eigen::VectorXd& raw_design_row) const;
};

SigRegressionModel fit_sig_regression(const std::vector<TruncatedSignature>& sigs,
                                      const std::vector<double>& prev_targets, const Eigen::VectorXd& y,
                                      const DesignRecipe& recipe, const PenaltySpec& penalty, bool standardize = true);

// Least-squares y_t = d0 + d1 * y_{t-1}; constant series degrades to
// d1 = 0, d0 = mean (flagged).
struct Ar1Fit {
    double intercept = 0;
    double slope = 0;
    bool degenerate = false;
};
Ar1Fit fit_ar1(const std::vector<double>& y);

} // namespace sigcast

#endif
