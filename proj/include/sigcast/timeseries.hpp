#ifndef SIGCAST_TIMESERIES_HPP
#define SIGCAST_TIMESERIES_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigcast {

// Calendar helpers. Timestamps are plain doubles: days since 1970-01-01
// for dated series, or whatever real axis an abstract series uses.
double parse_date(const std::string& iso);       // "YYYY-MM-DD" -> days since epoch
std::string format_date(double days_since_epoch);

// Wide table of timestamped, possibly-missing observations. Missing
// entries are NaN. The target column, when present, is named so the
// pipeline can enforce its publication lag.
struct TimeSeriesFrame {
    std::vector<double> timestamps; // strictly increasing
    std::vector<std::string> columns;
    Eigen::MatrixXd values; // rows = timestamps, NaN = missing
    std::string target_column;
    double target_lag = 0; // publication delay, same units as timestamps
    bool dated = false;    // timestamps are calendar days

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    int column_index(const std::string& name) const; // -1 if absent
    void validate() const;

    // Copy without the target column (and optionally a subset of columns).
    TimeSeriesFrame without_target() const;
    TimeSeriesFrame select_columns(const std::vector<std::string>& names) const;
};

// CSV wide format: header row, column 1 "date" (ISO-8601 or real number),
// remaining columns variable names, empty cell = missing.
TimeSeriesFrame read_csv(const std::string& path);
void write_csv(const std::string& path, const TimeSeriesFrame& frame);

enum class WindowType { Days, Ind, Expanding };

WindowType parse_window_type(const std::string& name);

struct WindowSpec {
    WindowType type = WindowType::Expanding;
    double max_length = 0; // days for Days, row count for Ind; ignored for Expanding
};

// Rows visible from `now` under the window spec: (now - max_length, now]
// for Days, the last max_length rows <= now for Ind, everything <= now
// for Expanding. Windows clipped short near the start of the sample are
// returned as-is with `clipped` set on the result.
struct WindowResult {
    TimeSeriesFrame frame;
    bool clipped = false;
};
WindowResult window_slice(const TimeSeriesFrame& frame, const WindowSpec& spec, double now);

enum class FillMethod { FFill, BFill, Rectilinear };

FillMethod parse_fill_method(const std::string& name);

struct PathBuildOptions {
    FillMethod fill = FillMethod::FFill;
    bool time_augment = true;
    bool basepoint = false;
    // Denominator for the scaled time channel; <= 0 means use the window span.
    double time_scale = 0;
};

// Turns a (windowed) frame into a fully observed piecewise-linear path.
// ffill forward-fills interior gaps and back-fills leading gaps;
// rectilinear additionally inserts axis-aligned points so time advances
// at constant value before each observation jump. The time channel,
// when present, is (timestamp - window start) / time_scale.
struct Path;
Path build_path(const TimeSeriesFrame& window, const PathBuildOptions& opts);

// Per-feature location/scale learned on training rows. Population
// (divide-by-n) variance convention, so results are bit-reproducible.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;                 // 1 for degenerate features
    std::vector<int> degenerate_features;  // zero-variance columns, passed through centered

    Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
    Eigen::VectorXd apply_row(const Eigen::VectorXd& row) const;
};

Standardizer fit_standardizer(const Eigen::MatrixXd& features); // needs >= 2 rows

} // namespace sigcast

#endif
