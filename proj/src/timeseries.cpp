#include "sigcast/timeseries.hpp"
#include "sigcast/signature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigcast {

namespace {

// days_from_civil / civil_from_days (Howard Hinnant's algorithms)
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y += (m <= 2);
}

bool looks_like_date(const std::string& s) {
    return s.size() == 10 && s[4] == '-' && s[7] == '-';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

double parse_date(const std::string& iso) {
    int y, m, d;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw std::invalid_argument("parse_date: expected YYYY-MM-DD, got '" + iso + "'");
    return static_cast<double>(days_from_civil(y, m, d));
}

std::string format_date(double days_since_epoch) {
    int y, m, d;
    civil_from_days(static_cast<long>(std::llround(days_since_epoch)), y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

int TimeSeriesFrame::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

void TimeSeriesFrame::validate() const {
    if (timestamps.size() != static_cast<std::size_t>(rows()))
        throw std::invalid_argument("TimeSeriesFrame: timestamp/row mismatch");
    if (columns.size() != static_cast<std::size_t>(cols()))
        throw std::invalid_argument("TimeSeriesFrame: column name/count mismatch");
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        if (!(timestamps[i] > timestamps[i - 1]))
            throw std::invalid_argument("TimeSeriesFrame: timestamps must be strictly increasing");
    if (!target_column.empty()) {
        if (column_index(target_column) < 0)
            throw std::invalid_argument("TimeSeriesFrame: target column '" + target_column + "' not found");
        if (cols() < 2) throw std::invalid_argument("TimeSeriesFrame: need at least one non-target column");
    }
}

TimeSeriesFrame TimeSeriesFrame::without_target() const {
    if (target_column.empty()) return *this;
    std::vector<std::string> keep;
    for (const auto& c : columns)
        if (c != target_column) keep.push_back(c);
    TimeSeriesFrame out = select_columns(keep);
    out.target_column.clear();
    return out;
}

TimeSeriesFrame TimeSeriesFrame::select_columns(const std::vector<std::string>& names) const {
    TimeSeriesFrame out;
    out.timestamps = timestamps;
    out.columns = names;
    out.target_column = target_column;
    out.target_lag = target_lag;
    out.dated = dated;
    out.values.resize(rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
        int src = column_index(names[j]);
        if (src < 0) throw std::invalid_argument("select_columns: unknown column '" + names[j] + "'");
        out.values.col(static_cast<Eigen::Index>(j)) = values.col(src);
    }
    return out;
}

TimeSeriesFrame read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + path);
    auto header = split_csv_line(line);
    if (header.size() < 2) throw std::runtime_error("CSV needs a date column and at least one series: " + path);

    TimeSeriesFrame frame;
    frame.columns.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    bool dated = false, first_row = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("CSV row with " + std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(header.size()) + ": " + path);
        if (first_row) {
            dated = looks_like_date(fields[0]);
            first_row = false;
        }
        frame.timestamps.push_back(dated ? parse_date(fields[0]) : std::stod(fields[0]));
        std::vector<double> row;
        for (std::size_t j = 1; j < fields.size(); ++j)
            row.push_back(fields[j].empty() ? std::nan("") : std::stod(fields[j]));
        rows.push_back(std::move(row));
    }
    frame.dated = dated;
    frame.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(frame.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            frame.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    frame.validate();
    return frame;
}

void write_csv(const std::string& path, const TimeSeriesFrame& frame) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    out << "date";
    for (const auto& c : frame.columns) out << ',' << c;
    out << '\n';
    out.precision(17);
    for (int i = 0; i < frame.rows(); ++i) {
        if (frame.dated)
            out << format_date(frame.timestamps[static_cast<std::size_t>(i)]);
        else
            out << frame.timestamps[static_cast<std::size_t>(i)];
        for (int j = 0; j < frame.cols(); ++j) {
            out << ',';
            double v = frame.values(i, j);
            if (!std::isnan(v)) out << v;
        }
        out << '\n';
    }
}

WindowType parse_window_type(const std::string& name) {
    if (name == "days") return WindowType::Days;
    if (name == "ind") return WindowType::Ind;
    if (name == "expanding" || name == "none") return WindowType::Expanding;
    throw std::invalid_argument("unknown window_type: " + name);
}

WindowResult window_slice(const TimeSeriesFrame& frame, const WindowSpec& spec, double now) {
    if (frame.rows() == 0) throw std::invalid_argument("window_slice: empty frame");
    if (now < frame.timestamps.front())
        throw std::invalid_argument("window_slice: now precedes the data range");
    int hi = 0; // rows [lo, hi) retained
    while (hi < frame.rows() && frame.timestamps[static_cast<std::size_t>(hi)] <= now) ++hi;
    int lo = 0;
    bool clipped = false;
    switch (spec.type) {
        case WindowType::Days:
            while (lo < hi && frame.timestamps[static_cast<std::size_t>(lo)] <= now - spec.max_length) ++lo;
            // data starts inside the requested window: used as-is, flagged
            clipped = lo == 0 && frame.timestamps.front() > now - spec.max_length;
            break;
        case WindowType::Ind:
            if (hi - lo > static_cast<int>(spec.max_length))
                lo = hi - static_cast<int>(spec.max_length);
            else
                clipped = hi - lo < static_cast<int>(spec.max_length);
            break;
        case WindowType::Expanding:
            break;
    }
    if (hi - lo < 1) throw std::invalid_argument("window_slice: empty window");
    WindowResult res;
    res.clipped = clipped;
    TimeSeriesFrame& out = res.frame;
    out.columns = frame.columns;
    out.target_column = frame.target_column;
    out.target_lag = frame.target_lag;
    out.dated = frame.dated;
    out.timestamps.assign(frame.timestamps.begin() + lo, frame.timestamps.begin() + hi);
    out.values = frame.values.middleRows(lo, hi - lo);
    return res;
}

FillMethod parse_fill_method(const std::string& name) {
    if (name == "ffill") return FillMethod::FFill;
    if (name == "bfill") return FillMethod::BFill;
    if (name == "rectilinear") return FillMethod::Rectilinear;
    throw std::invalid_argument("unknown fill_method: " + name);
}

Path build_path(const TimeSeriesFrame& window, const PathBuildOptions& opts) {
    const int n = window.rows(), d = window.cols();
    if (n == 0) throw std::invalid_argument("build_path: empty window");

    // fill missing values per channel
    Eigen::MatrixXd filled = window.values;
    for (int j = 0; j < d; ++j) {
        bool any = false;
        for (int i = 0; i < n; ++i) any = any || !std::isnan(filled(i, j));
        if (!any)
            throw std::invalid_argument("build_path: channel '" + window.columns[static_cast<std::size_t>(j)] +
                                        "' entirely missing in window");
        if (opts.fill == FillMethod::BFill) {
            for (int i = n - 2; i >= 0; --i)
                if (std::isnan(filled(i, j))) filled(i, j) = filled(i + 1, j);
            for (int i = 1; i < n; ++i) // trailing gaps fall back to forward fill
                if (std::isnan(filled(i, j))) filled(i, j) = filled(i - 1, j);
        } else {
            // ffill and rectilinear: forward fill, leading gaps back-filled
            for (int i = 1; i < n; ++i)
                if (std::isnan(filled(i, j))) filled(i, j) = filled(i - 1, j);
            for (int i = n - 2; i >= 0; --i)
                if (std::isnan(filled(i, j))) filled(i, j) = filled(i + 1, j);
        }
    }

    const double t0 = window.timestamps.front();
    double scale = opts.time_scale;
    if (scale <= 0) scale = std::max(window.timestamps.back() - t0, 1.0);
    auto scaled_time = [&](int i) { return (window.timestamps[static_cast<std::size_t>(i)] - t0) / scale; };

    Path path;
    const int tcols = opts.time_augment ? 1 : 0;
    if (opts.time_augment) path.channel_names.push_back("t");
    for (const auto& c : window.columns) path.channel_names.push_back(c);

    std::vector<Eigen::VectorXd> pts;
    auto point = [&](double t, const Eigen::RowVectorXd& vals) {
        Eigen::VectorXd p(tcols + d);
        if (opts.time_augment) p[0] = t;
        p.tail(d) = vals.transpose();
        pts.push_back(std::move(p));
    };

    if (opts.basepoint) pts.push_back(Eigen::VectorXd::Zero(tcols + d));
    point(scaled_time(0), filled.row(0));
    for (int i = 1; i < n; ++i) {
        if (opts.fill == FillMethod::Rectilinear) {
            // time advances at constant value, then the value jumps
            point(scaled_time(i), filled.row(i - 1));
            if ((filled.row(i) - filled.row(i - 1)).cwiseAbs().maxCoeff() > 0)
                point(scaled_time(i), filled.row(i));
        } else {
            point(scaled_time(i), filled.row(i));
        }
    }
    if (pts.size() < 2) pts.push_back(pts.back()); // single observation: degenerate constant segment

    path.values.resize(static_cast<Eigen::Index>(pts.size()), tcols + d);
    path.times.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        path.values.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
        path.times[i] = static_cast<double>(i); // parameterization only fixes segment order
    }
    return path;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& features) {
    if (features.rows() < 2) throw std::invalid_argument("fit_standardizer: need >= 2 training rows");
    Standardizer s;
    const Eigen::Index p = features.cols();
    s.mean = features.colwise().mean();
    s.scale.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double var = (features.col(j).array() - s.mean[j]).square().mean();
        double sd = std::sqrt(var);
        if (sd > 0) {
            s.scale[j] = sd;
        } else {
            s.scale[j] = 1.0; // degenerate feature: centered, not rescaled
            s.degenerate_features.push_back(static_cast<int>(j));
        }
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& features) const {
    return (features.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Standardizer::apply_row(const Eigen::VectorXd& row) const {
    return (row - mean).cwiseQuotient(scale);
}

} // namespace sigcast
