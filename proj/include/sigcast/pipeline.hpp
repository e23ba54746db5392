#ifndef SIGCAST_PIPELINE_HPP
#define SIGCAST_PIPELINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigcast/factors.hpp"
#include "sigcast/regress.hpp"
#include "sigcast/timeseries.hpp"

namespace sigcast {

// Nowcasting run configuration. Parsed from a flat key=value document;
// any hyperparameter key may hold a bracketed list, which becomes a
// grid-search axis.
struct NowcastConfig {
    std::string target;
    WindowSpec window;
    FillMethod fill = FillMethod::FFill;
    int level = 2;
    int t_level = 2;
    bool time_augment = true;
    bool basepoint = false;
    bool use_multiplier = false;
    bool use_prev_value = false;
    bool fit_intercept = true;
    bool standardize = true;
    bool multiplier_all_words = false;
    KeepMode keep_sigs = KeepMode::All;
    PenaltySpec penalty{Regularize::ElasticNet, 1.0, 0.5};
    double target_lag = 0;
    double training_proportion = -1; // < 0: unset, use explicit date ranges
    bool reduce_dim = false;
    int n_components = 1;
    bool recursive = true;
    FactorStructure factors;

    // evaluation ranges as timestamps; NaN = unset
    double train_start, train_end, validation_start, validation_end, test_start, test_end;

    // raw key -> values; keys with more than one value are grid axes
    std::map<std::string, std::vector<std::string>> raw;

    NowcastConfig();
    bool has_grid() const;
};

// Parses the key=value document, applies defaults, and validates the
// first value of every axis. Throws std::invalid_argument naming the
// offending key; an empty document lists the required keys.
NowcastConfig parse_config(const std::string& text);
NowcastConfig parse_config_file(const std::string& path);
std::string serialize_config(const NowcastConfig& config);

// Cartesian expansion of the grid axes, keys in lexicographic order,
// values in listed order. A gridless config expands to itself.
std::vector<NowcastConfig> grid_points(const NowcastConfig& config);

// One-line description of the hyperparameters that vary across the grid.
std::string grid_point_label(const NowcastConfig& config);

// Target bookkeeping under the publication lag.
struct TargetRelease {
    double reference_time;
    double value;
};
std::vector<TargetRelease> target_releases(const TimeSeriesFrame& frame, const std::string& target);

// A fitted pipeline model: the regression plus whatever feature
// machinery (PCA factors) was frozen at fit time.
struct PipelineModel {
    SigRegressionModel regression;
    std::optional<PCAModel> pca;
    NowcastConfig config;
    int training_rows = 0;
};

// Algorithm-1 style fit at time `now`: one design row per historical
// target release published by `now`, each row built from the lookback
// window ending at that release's reference time.
PipelineModel fit_model(const TimeSeriesFrame& frame, const NowcastConfig& config, double now);

// Prediction at `now` from the lookback window ending at `now`. Returns
// NaN when the window precondition fails (no usable previous target).
double nowcast_at(const PipelineModel& model, const TimeSeriesFrame& frame, double now);

struct GridSearchResult {
    NowcastConfig best;
    std::string best_label;
    std::vector<std::pair<std::string, double>> table; // label -> validation RMSE
};
GridSearchResult grid_search(const TimeSeriesFrame& frame, const NowcastConfig& config);

struct NowcastPoint {
    double time;
    double prediction;
    double realized; // NaN until the target is eventually observed
};

struct NowcastRun {
    std::vector<NowcastPoint> points;
    NowcastConfig config;
    std::string hyper_label;
    std::vector<std::pair<std::string, double>> validation_table;
    std::vector<TargetRelease> releases;
};

// Resolves the grid on the validation period (if any), then nowcasts
// every frame timestamp in the test range: recursive mode refits at each
// time, batch mode fits once on everything published by test_start.
NowcastRun run_nowcast(const TimeSeriesFrame& frame, const NowcastConfig& config);

struct Evaluation {
    double rmse = 0;
    double mae = 0;
    int n = 0;
    std::map<int, double> mae_by_days_since_release;
};
Evaluation evaluate(const NowcastRun& run);
Evaluation evaluate_points(const std::vector<NowcastPoint>& points, const std::vector<TargetRelease>& releases,
                           double target_lag);

// AR(1) baseline: one-step prediction from the latest published target
// value, re-scored at every frame timestamp in the test range.
struct BaselineRun {
    std::vector<NowcastPoint> points;
    Ar1Fit fit;
};
BaselineRun run_ar1_baseline(const TimeSeriesFrame& frame, const std::string& target, double target_lag,
                             double fit_until, double test_start, double test_end);

void write_nowcasts_csv(const std::string& path, const NowcastRun& run, bool dated);
void write_points_csv(const std::string& path, const std::vector<NowcastPoint>& points, bool dated);
void write_evaluation_json(const std::string& path, const Evaluation& eval);
void write_coefficients_csv(const std::string& path, const PipelineModel& model);

} // namespace sigcast

#endif
