#include "sigcast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sigcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool looks_like_date(const std::string& s) {
    return s.size() == 10 && s[4] == '-' && s[7] == '-';
}

double parse_time_value(const std::string& s) {
    return looks_like_date(s) ? parse_date(s) : std::stod(s);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "True" || v == "1") return true;
    if (v == "false" || v == "False" || v == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

FactorStructure parse_factor_groups(const std::string& key, const std::string& v) {
    // name1:colA|colB;name2:colC|colD
    FactorStructure fs;
    std::stringstream ss(v);
    std::string group;
    while (std::getline(ss, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::size_t colon = group.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("config key '" + key + "': group '" + group + "' missing ':'");
        FactorStructure::Group g;
        g.name = trim(group.substr(0, colon));
        std::stringstream cols(group.substr(colon + 1));
        std::string col;
        while (std::getline(cols, col, '|')) {
            col = trim(col);
            if (!col.empty()) g.columns.push_back(col);
        }
        fs.groups.push_back(std::move(g));
    }
    return fs;
}

std::string factor_groups_to_string(const FactorStructure& fs) {
    std::string out;
    for (const auto& g : fs.groups) {
        if (!out.empty()) out += ';';
        out += g.name + ":";
        for (std::size_t i = 0; i < g.columns.size(); ++i) {
            if (i) out += '|';
            out += g.columns[i];
        }
    }
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "target",         "window_type",      "max_length",       "fill_method",
        "level",          "t_level",          "time_augment",     "basepoint",
        "use_multiplier", "keep_sigs",        "regularize",       "alpha",
        "l1_ratio",       "fit_intercept",    "target_lag",       "use_prev_value",
        "standardize",    "training_proportion", "reduce_dim",    "k",
        "recursive",      "factor_groups",    "multiplier_all_words",
        "train_start",    "train_end",        "validation_start", "validation_end",
        "test_start",     "test_end"};
    return keys;
}

void apply_value(NowcastConfig& cfg, const std::string& key, const std::string& v) {
    if (key == "target") cfg.target = v;
    else if (key == "window_type") cfg.window.type = parse_window_type(v);
    else if (key == "max_length") cfg.window.max_length = parse_double(key, v);
    else if (key == "fill_method") cfg.fill = parse_fill_method(v);
    else if (key == "level") cfg.level = parse_int(key, v);
    else if (key == "t_level") cfg.t_level = parse_int(key, v);
    else if (key == "time_augment") cfg.time_augment = parse_bool(key, v);
    else if (key == "basepoint") cfg.basepoint = parse_bool(key, v);
    else if (key == "use_multiplier") cfg.use_multiplier = parse_bool(key, v);
    else if (key == "keep_sigs") cfg.keep_sigs = parse_keep_mode(v);
    else if (key == "regularize") cfg.penalty.regularize = parse_regularize(v);
    else if (key == "alpha") cfg.penalty.gamma = parse_double(key, v);
    else if (key == "l1_ratio") cfg.penalty.l1_ratio = parse_double(key, v);
    else if (key == "fit_intercept") cfg.fit_intercept = parse_bool(key, v);
    else if (key == "target_lag") cfg.target_lag = parse_double(key, v);
    else if (key == "use_prev_value") cfg.use_prev_value = parse_bool(key, v);
    else if (key == "standardize") cfg.standardize = parse_bool(key, v);
    else if (key == "training_proportion") cfg.training_proportion = parse_double(key, v);
    else if (key == "reduce_dim") cfg.reduce_dim = parse_bool(key, v);
    else if (key == "k") cfg.n_components = parse_int(key, v);
    else if (key == "recursive") cfg.recursive = parse_bool(key, v);
    else if (key == "factor_groups") cfg.factors = parse_factor_groups(key, v);
    else if (key == "multiplier_all_words") cfg.multiplier_all_words = parse_bool(key, v);
    else if (key == "train_start") cfg.train_start = parse_time_value(v);
    else if (key == "train_end") cfg.train_end = parse_time_value(v);
    else if (key == "validation_start") cfg.validation_start = parse_time_value(v);
    else if (key == "validation_end") cfg.validation_end = parse_time_value(v);
    else if (key == "test_start") cfg.test_start = parse_time_value(v);
    else if (key == "test_end") cfg.test_end = parse_time_value(v);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void validate_combination(const NowcastConfig& cfg) {
    if (cfg.target.empty()) throw std::invalid_argument("config key 'target' is required");
    if (cfg.level < 1) throw std::invalid_argument("config key 'level' must be >= 1");
    if (cfg.t_level > cfg.level)
        throw std::invalid_argument("config key 't_level' (" + std::to_string(cfg.t_level) +
                                    ") exceeds 'level' (" + std::to_string(cfg.level) + ")");
    if (cfg.t_level < 0) throw std::invalid_argument("config key 't_level' must be >= 0");
    if (cfg.window.type != WindowType::Expanding && cfg.window.max_length <= 0)
        throw std::invalid_argument("config key 'max_length' is required for moving windows");
    if (cfg.penalty.gamma < 0) throw std::invalid_argument("config key 'alpha' must be >= 0");
    if (cfg.penalty.l1_ratio < 0 || cfg.penalty.l1_ratio > 1)
        throw std::invalid_argument("config key 'l1_ratio' must lie in [0,1]");
    if (!cfg.time_augment && cfg.keep_sigs != KeepMode::All)
        throw std::invalid_argument("config key 'keep_sigs': linear term filters need 'time_augment'");
    if (cfg.reduce_dim && cfg.n_components != 1)
        throw std::invalid_argument("config key 'k': only the first principal component per group is supported");
}

DesignRecipe recipe_from(const NowcastConfig& cfg) {
    DesignRecipe r;
    r.keep_sigs = cfg.keep_sigs;
    r.level = cfg.level;
    r.t_level = cfg.time_augment ? cfg.t_level : 0;
    r.use_prev_value = cfg.use_prev_value;
    r.use_multiplier = cfg.use_multiplier;
    r.fit_intercept = cfg.fit_intercept;
    r.multiplier_all_words = cfg.multiplier_all_words;
    r.time_channel = 0;
    return r;
}

// rows with timestamp <= t
TimeSeriesFrame rows_upto(const TimeSeriesFrame& frame, double t) {
    int hi = 0;
    while (hi < frame.rows() && frame.timestamps[static_cast<std::size_t>(hi)] <= t) ++hi;
    TimeSeriesFrame out = frame;
    out.timestamps.assign(frame.timestamps.begin(), frame.timestamps.begin() + hi);
    out.values = frame.values.topRows(hi);
    return out;
}

// ffill with leading bfill, in place, every column
void fill_complete(TimeSeriesFrame& frame) {
    const int n = frame.rows();
    for (int j = 0; j < frame.cols(); ++j) {
        for (int i = 1; i < n; ++i)
            if (std::isnan(frame.values(i, j))) frame.values(i, j) = frame.values(i - 1, j);
        for (int i = n - 2; i >= 0; --i)
            if (std::isnan(frame.values(i, j))) frame.values(i, j) = frame.values(i + 1, j);
    }
}

FactorStructure effective_structure(const NowcastConfig& cfg, const std::vector<std::string>& columns) {
    if (!cfg.factors.groups.empty()) return cfg.factors;
    FactorStructure fs;
    fs.groups.push_back({"global", columns});
    return fs;
}

// Feature frame visible at time `now`: indicator rows <= now, optionally
// reduced to per-group first principal components.
TimeSeriesFrame features_at(const TimeSeriesFrame& frame, const NowcastConfig& cfg,
                            const std::optional<PCAModel>& pca, double now) {
    TimeSeriesFrame feats = rows_upto(frame.without_target(), now);
    if (!cfg.reduce_dim) return feats;
    fill_complete(feats);
    return pca_transform(*pca, feats);
}

const TargetRelease* last_known_release(const std::vector<TargetRelease>& releases, double now, double lag) {
    const TargetRelease* best = nullptr;
    for (const auto& r : releases)
        if (r.reference_time < now && r.reference_time + lag <= now) best = &r;
    return best;
}

const TargetRelease* pending_release(const std::vector<TargetRelease>& releases, double now, double lag) {
    for (const auto& r : releases)
        if (r.reference_time + lag > now) return &r;
    return nullptr;
}

PathBuildOptions path_options(const NowcastConfig& cfg) {
    PathBuildOptions opts;
    opts.fill = cfg.fill;
    opts.time_augment = cfg.time_augment;
    opts.basepoint = cfg.basepoint;
    opts.time_scale = cfg.window.type == WindowType::Days ? cfg.window.max_length : 0;
    return opts;
}

double mean_abs(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s / static_cast<double>(v.size());
}

} // namespace

NowcastConfig::NowcastConfig()
    : train_start(kNaN), train_end(kNaN), validation_start(kNaN), validation_end(kNaN), test_start(kNaN),
      test_end(kNaN) {}

bool NowcastConfig::has_grid() const {
    for (const auto& [k, vs] : raw)
        if (vs.size() > 1) return true;
    return false;
}

NowcastConfig parse_config(const std::string& text) {
    NowcastConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            throw std::invalid_argument("unknown config key '" + key + "'");
        std::vector<std::string> values;
        if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
            std::stringstream vs(value.substr(1, value.size() - 2));
            std::string item;
            while (std::getline(vs, item, ',')) {
                item = trim(item);
                if (!item.empty()) values.push_back(item);
            }
            if (values.empty()) throw std::invalid_argument("config key '" + key + "': empty grid axis");
        } else {
            values.push_back(value);
        }
        cfg.raw[key] = values;
    }
    if (cfg.raw.empty())
        throw std::invalid_argument("empty config; required keys: target, level");
    for (const auto& [key, values] : cfg.raw) apply_value(cfg, key, values.front());
    if (!cfg.raw.count("t_level") && cfg.raw.count("level")) cfg.t_level = cfg.level;
    validate_combination(cfg);
    return cfg;
}

NowcastConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const NowcastConfig& config) {
    std::string out;
    for (const auto& [key, values] : config.raw) {
        out += key + " = ";
        if (values.size() == 1) {
            out += values.front();
        } else {
            out += '[';
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out += ',';
                out += values[i];
            }
            out += ']';
        }
        out += '\n';
    }
    return out;
}

std::vector<NowcastConfig> grid_points(const NowcastConfig& config) {
    std::vector<std::string> axis_keys;
    for (const auto& [k, vs] : config.raw)
        if (vs.size() > 1) axis_keys.push_back(k); // std::map: lexicographic order
    std::vector<NowcastConfig> points{config};
    if (axis_keys.empty()) return points;
    std::vector<NowcastConfig> out;
    std::vector<std::size_t> idx(axis_keys.size(), 0);
    while (true) {
        NowcastConfig p = config;
        for (std::size_t a = 0; a < axis_keys.size(); ++a) {
            const std::string& v = config.raw.at(axis_keys[a])[idx[a]];
            apply_value(p, axis_keys[a], v);
            p.raw[axis_keys[a]] = {v};
        }
        out.push_back(std::move(p));
        // odometer increment, last axis fastest
        std::size_t a = axis_keys.size();
        while (a > 0) {
            --a;
            if (++idx[a] < config.raw.at(axis_keys[a]).size()) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
    }
}

std::string grid_point_label(const NowcastConfig& config) {
    std::string label;
    for (const auto& [k, vs] : config.raw) {
        if (!label.empty()) label += ' ';
        label += k + "=" + vs.front();
    }
    return label;
}

std::vector<TargetRelease> target_releases(const TimeSeriesFrame& frame, const std::string& target) {
    int c = frame.column_index(target);
    if (c < 0) throw std::invalid_argument("target column '" + target + "' not found");
    std::vector<TargetRelease> out;
    for (int i = 0; i < frame.rows(); ++i) {
        double v = frame.values(i, c);
        if (!std::isnan(v)) out.push_back({frame.timestamps[static_cast<std::size_t>(i)], v});
    }
    return out;
}

PipelineModel fit_model(const TimeSeriesFrame& frame, const NowcastConfig& config, double now) {
    validate_combination(config);
    TimeSeriesFrame work = frame;
    work.target_column = config.target;
    work.target_lag = config.target_lag;
    work.validate();

    PipelineModel model;
    model.config = config;
    if (config.reduce_dim) {
        TimeSeriesFrame hist = rows_upto(work.without_target(), now);
        fill_complete(hist);
        model.pca = fit_pca(hist, effective_structure(config, hist.columns));
    }

    auto releases = target_releases(work, config.target);
    const bool needs_prev = config.use_prev_value || config.use_multiplier;

    std::vector<TruncatedSignature> sigs;
    std::vector<double> prevs;
    std::vector<double> ys;
    const PathBuildOptions opts = path_options(config);
    for (const auto& rel : releases) {
        if (rel.reference_time + config.target_lag > now) continue; // not yet published
        const TargetRelease* prev = last_known_release(releases, rel.reference_time, config.target_lag);
        if (needs_prev && !prev) continue;
        TimeSeriesFrame feats = features_at(work, config, model.pca, rel.reference_time);
        if (feats.rows() == 0) continue;
        WindowResult win;
        try {
            win = window_slice(feats, config.window, rel.reference_time);
        } catch (const std::invalid_argument&) {
            continue; // reference time precedes the data
        }
        if (needs_prev && prev->reference_time < win.frame.timestamps.front())
            continue; // window must cover the last target measurement
        sigs.push_back(signature(build_path(win.frame, opts), config.level));
        prevs.push_back(prev ? prev->value : kNaN);
        ys.push_back(rel.value);
    }
    if (sigs.size() < 2) throw std::runtime_error("fit_model: fewer than 2 training rows available");

    Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < ys.size(); ++i) y[static_cast<Eigen::Index>(i)] = ys[i];
    model.regression = fit_sig_regression(sigs, prevs, y, recipe_from(config), config.penalty, config.standardize);
    model.training_rows = static_cast<int>(ys.size());
    std::vector<std::string> channels;
    if (config.time_augment) channels.push_back("t");
    if (config.reduce_dim)
        for (const auto& g : model.pca->groups) channels.push_back(g.name);
    else
        for (const auto& c : work.without_target().columns) channels.push_back(c);
    model.regression.column_names =
        design_column_names(recipe_from(config), model.regression.selection, channels);
    return model;
}

double nowcast_at(const PipelineModel& model, const TimeSeriesFrame& frame, double now) {
    const NowcastConfig& cfg = model.config;
    TimeSeriesFrame work = frame;
    work.target_column = cfg.target;
    work.target_lag = cfg.target_lag;
    auto releases = target_releases(work, cfg.target);
    const TargetRelease* prev = last_known_release(releases, now, cfg.target_lag);
    const bool needs_prev = cfg.use_prev_value || cfg.use_multiplier;
    if (needs_prev && !prev) return kNaN;

    TimeSeriesFrame feats = features_at(work, cfg, model.pca, now);
    if (feats.rows() == 0) return kNaN;
    WindowResult win;
    try {
        win = window_slice(feats, cfg.window, now);
    } catch (const std::invalid_argument&) {
        return kNaN;
    }
    if (needs_prev && prev->reference_time < win.frame.timestamps.front()) return kNaN;
    TruncatedSignature sig = signature(build_path(win.frame, path_options(cfg)), cfg.level);
    return model.regression.predict(sig, prev ? prev->value : kNaN);
}

GridSearchResult grid_search(const TimeSeriesFrame& frame, const NowcastConfig& config) {
    if (std::isnan(config.validation_start) || std::isnan(config.validation_end))
        throw std::invalid_argument("grid_search: validation range not set");
    auto releases = target_releases(frame, config.target);
    std::vector<TargetRelease> validation;
    for (const auto& r : releases)
        if (r.reference_time >= config.validation_start && r.reference_time <= config.validation_end)
            validation.push_back(r);
    if (validation.empty()) throw std::invalid_argument("grid_search: no target releases in the validation range");

    GridSearchResult result;
    double best_rmse = std::numeric_limits<double>::infinity();
    std::vector<std::string> failures;
    for (const auto& point : grid_points(config)) {
        const std::string label = grid_point_label(point);
        double rmse = std::numeric_limits<double>::infinity();
        try {
            double sse = 0;
            int n = 0;
            for (const auto& vr : validation) {
                PipelineModel model = fit_model(frame, point, vr.reference_time);
                double pred = nowcast_at(model, frame, vr.reference_time);
                if (std::isnan(pred)) continue;
                sse += (pred - vr.value) * (pred - vr.value);
                ++n;
            }
            if (n == 0) throw std::runtime_error("no usable validation nowcasts");
            rmse = std::sqrt(sse / n);
        } catch (const std::exception& e) {
            failures.push_back(label + ": " + e.what());
        }
        result.table.emplace_back(label, rmse);
        if (rmse < best_rmse) { // strict: first winner kept on ties
            best_rmse = rmse;
            result.best = point;
            result.best_label = label;
        }
    }
    if (!std::isfinite(best_rmse)) {
        std::string msg = "grid_search: every grid point failed";
        for (const auto& f : failures) msg += "\n  " + f;
        throw std::runtime_error(msg);
    }
    return result;
}

namespace {

// Derive train/validation/test date ranges from training_proportion when
// explicit ranges are absent: test gets (1 - p) of the releases, the
// remainder splits p / (1 - p) again into train and validation.
NowcastConfig resolve_ranges(const TimeSeriesFrame& frame, const NowcastConfig& config) {
    NowcastConfig cfg = config;
    if (!std::isnan(cfg.test_start)) {
        if (std::isnan(cfg.test_end)) cfg.test_end = frame.timestamps.back();
        return cfg;
    }
    if (cfg.training_proportion <= 0 || cfg.training_proportion >= 1)
        throw std::invalid_argument("config: set test_start/test_end or a training_proportion in (0,1)");
    auto releases = target_releases(frame, cfg.target);
    const int n = static_cast<int>(releases.size());
    if (n < 5) throw std::invalid_argument("config: too few target releases to split by proportion");
    const double p = cfg.training_proportion;
    const int n_test = std::max(1, static_cast<int>(std::lround((1 - p) * n)));
    const int n_trainval = n - n_test;
    const int n_val = std::max(1, static_cast<int>(std::lround((1 - p) * n_trainval)));
    const int n_train = n_trainval - n_val;
    cfg.train_start = frame.timestamps.front();
    cfg.train_end = releases[static_cast<std::size_t>(n_train - 1)].reference_time;
    cfg.validation_start = releases[static_cast<std::size_t>(n_train)].reference_time;
    cfg.validation_end = releases[static_cast<std::size_t>(n_trainval - 1)].reference_time;
    cfg.test_start = releases[static_cast<std::size_t>(n_trainval)].reference_time;
    cfg.test_end = frame.timestamps.back();
    return cfg;
}

} // namespace

NowcastRun run_nowcast(const TimeSeriesFrame& frame, const NowcastConfig& config) {
    NowcastConfig cfg = resolve_ranges(frame, config);
    NowcastRun run;
    if (cfg.has_grid()) {
        GridSearchResult gs = grid_search(frame, cfg);
        run.validation_table = gs.table;
        run.hyper_label = gs.best_label;
        cfg = gs.best;
        cfg.test_start = resolve_ranges(frame, config).test_start;
        cfg.test_end = resolve_ranges(frame, config).test_end;
    } else {
        run.hyper_label = grid_point_label(cfg);
    }
    run.config = cfg;
    run.releases = target_releases(frame, cfg.target);

    const auto& releases = run.releases;
    PipelineModel batch_model;
    bool have_batch = false;
    if (!cfg.recursive) {
        batch_model = fit_model(frame, cfg, cfg.test_start);
        have_batch = true;
    }
    PipelineModel recursive_model;
    int cached_known = -1;
    for (double t : frame.timestamps) {
        if (t < cfg.test_start || t > cfg.test_end) continue;
        const PipelineModel* model = nullptr;
        if (have_batch) {
            model = &batch_model;
        } else {
            int known = 0;
            for (const auto& r : releases) known += (r.reference_time + cfg.target_lag <= t);
            // refitting only matters once new information arrives
            if (known != cached_known || cfg.reduce_dim) {
                recursive_model = fit_model(frame, cfg, t);
                cached_known = known;
            }
            model = &recursive_model;
        }
        double pred = nowcast_at(*model, frame, t);
        if (std::isnan(pred)) continue;
        const TargetRelease* pending = pending_release(releases, t, cfg.target_lag);
        run.points.push_back({t, pred, pending ? pending->value : kNaN});
    }
    return run;
}

Evaluation evaluate_points(const std::vector<NowcastPoint>& points, const std::vector<TargetRelease>& releases,
                           double target_lag) {
    Evaluation ev;
    double sse = 0;
    std::map<int, std::vector<double>> by_offset;
    for (const auto& p : points) {
        if (std::isnan(p.realized) || std::isnan(p.prediction)) continue;
        const double err = p.prediction - p.realized;
        sse += err * err;
        ev.mae += std::abs(err);
        ++ev.n;
        double last_pub = kNaN;
        for (const auto& r : releases)
            if (r.reference_time + target_lag <= p.time) last_pub = r.reference_time + target_lag;
        if (!std::isnan(last_pub))
            by_offset[static_cast<int>(std::floor(p.time - last_pub))].push_back(std::abs(err));
    }
    if (ev.n == 0) throw std::runtime_error("evaluate: no nowcasts with realized targets");
    ev.rmse = std::sqrt(sse / ev.n);
    ev.mae /= ev.n;
    for (const auto& [offset, errs] : by_offset) ev.mae_by_days_since_release[offset] = mean_abs(errs);
    return ev;
}

Evaluation evaluate(const NowcastRun& run) {
    return evaluate_points(run.points, run.releases, run.config.target_lag);
}

BaselineRun run_ar1_baseline(const TimeSeriesFrame& frame, const std::string& target, double target_lag,
                             double fit_until, double test_start, double test_end) {
    auto releases = target_releases(frame, target);
    std::vector<double> train_values;
    for (const auto& r : releases)
        if (r.reference_time <= fit_until) train_values.push_back(r.value);
    BaselineRun run;
    run.fit = fit_ar1(train_values);
    for (double t : frame.timestamps) {
        if (t < test_start || t > test_end) continue;
        const TargetRelease* prev = last_known_release(releases, t, target_lag);
        if (!prev) continue;
        const TargetRelease* pending = pending_release(releases, t, target_lag);
        const double pred = run.fit.intercept + run.fit.slope * prev->value;
        run.points.push_back({t, pred, pending ? pending->value : kNaN});
    }
    return run;
}

void write_points_csv(const std::string& path, const std::vector<NowcastPoint>& points, bool dated) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write nowcasts: " + path);
    out << "time,prediction,realized\n";
    out.precision(17);
    for (const auto& p : points) {
        if (dated)
            out << format_date(p.time);
        else
            out << p.time;
        out << ',' << p.prediction << ',';
        if (!std::isnan(p.realized)) out << p.realized;
        out << '\n';
    }
}

void write_nowcasts_csv(const std::string& path, const NowcastRun& run, bool dated) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write nowcasts: " + path);
    out << "# hyperparameters: " << run.hyper_label << '\n';
    out << "time,prediction,realized\n";
    out.precision(17);
    for (const auto& p : run.points) {
        if (dated)
            out << format_date(p.time);
        else
            out << p.time;
        out << ',' << p.prediction << ',';
        if (!std::isnan(p.realized)) out << p.realized;
        out << '\n';
    }
}

void write_evaluation_json(const std::string& path, const Evaluation& eval) {
    nlohmann::json j;
    j["rmse"] = eval.rmse;
    j["mae"] = eval.mae;
    j["n"] = eval.n;
    nlohmann::json prof = nlohmann::json::object();
    for (const auto& [offset, mae] : eval.mae_by_days_since_release) prof[std::to_string(offset)] = mae;
    j["mae_by_days_since_release"] = prof;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write evaluation: " + path);
    out << j.dump(2) << '\n';
}

void write_coefficients_csv(const std::string& path, const PipelineModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write coefficients: " + path);
    out << "column,coefficient_standardized,coefficient_raw\n";
    out.precision(17);
    const auto& reg = model.regression;
    const auto& names = reg.column_names;
    for (Eigen::Index i = 0; i < reg.coefficients.size(); ++i) {
        out << (static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)] : "col" + std::to_string(i))
            << ',' << reg.coefficients[i] << ',' << reg.coefficients[i] / reg.standardizer.scale[i] << '\n';
    }
    out << "intercept," << reg.intercept << ',' << reg.intercept << '\n';
}

} // namespace sigcast
