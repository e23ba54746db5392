#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigcast/filters.hpp"
#include "sigcast/pipeline.hpp"
#include "sigcast/signature.hpp"
#include "sigcast/simlab.hpp"
#include "sigcast/timeseries.hpp"

namespace {

int cmd_sig(const std::string& input, int level, int t_level, const std::string& keep, bool time_augment,
            bool basepoint, const std::string& out) {
    sigcast::TimeSeriesFrame frame = sigcast::read_csv(input);
    sigcast::PathBuildOptions opts;
    opts.time_augment = time_augment;
    opts.basepoint = basepoint;
    sigcast::Path path = sigcast::build_path(frame, opts);
    sigcast::TruncatedSignature sig = sigcast::signature(path, level);
    sigcast::KeepMode mode = sigcast::parse_keep_mode(keep);
    sigcast::TermSelection sel = sigcast::select_terms(sig.dim, level, mode, 0, time_augment ? t_level : 0);
    Eigen::VectorXd feats = sigcast::filter_terms(sig, sel);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write output: " + out);
    os.precision(17);
    os << "word,coefficient\n";
    for (std::size_t i = 0; i < sel.size(); ++i)
        os << '"' << sigcast::word_to_string(sel.words[i], path.channel_names) << "\"," << feats[static_cast<Eigen::Index>(i)]
           << '\n';
    std::cout << "wrote " << sel.size() << " coefficients to " << out << "\n";
    return 0;
}

int cmd_simulate(const std::string& regime, std::uint64_t seed, int paths, const std::string& out_dir) {
    sigcast::SimConfig config = sigcast::regime_config(regime);
    config.seed = seed;
    if (paths > 0) {
        config.n_paths = paths;
        config.n_train = paths * 4 / 5;
    }
    config.validate();
    sigcast::RegimeResult result = sigcast::run_regime(config);
    sigcast::write_report_json(out_dir + "/report.json", regime, result.report);
    sigcast::write_residual_pairs_csv(out_dir + "/residuals.csv", result.report);
    const auto& r = result.report;
    std::cout << regime << ": slope=" << r.slope << " intercept=" << r.intercept << " r2=" << r.r_squared
              << " kf_var=" << r.kf_var << " sig_var=" << r.sig_var << " n_test=" << r.n_test << "\n";
    if (r.n_test < 100) std::cout << "warning: fewer than 100 test paths, statistics are noisy\n";
    return 0;
}

int cmd_nowcast(const std::string& config_path, const std::string& data_path, const std::string& out_dir) {
    sigcast::NowcastConfig config = sigcast::parse_config_file(config_path);
    sigcast::TimeSeriesFrame frame = sigcast::read_csv(data_path);
    sigcast::NowcastRun run = sigcast::run_nowcast(frame, config);
    sigcast::write_nowcasts_csv(out_dir + "/nowcasts.csv", run, frame.dated);
    sigcast::Evaluation eval = sigcast::evaluate(run);
    sigcast::write_evaluation_json(out_dir + "/evaluation.json", eval);
    if (!run.validation_table.empty()) {
        std::ofstream vt(out_dir + "/validation.csv");
        vt.precision(17);
        vt << "hyperparameters,rmse\n";
        for (const auto& [label, rmse] : run.validation_table) vt << '"' << label << "\"," << rmse << '\n';
    }
    std::cout << "selected: " << run.hyper_label << "\n";
    std::cout << "test rmse=" << eval.rmse << " mae=" << eval.mae << " n=" << eval.n << "\n";
    return 0;
}

int cmd_baseline(const std::string& data_path, const std::string& target, double target_lag, double proportion,
                 const std::string& out_dir) {
    sigcast::TimeSeriesFrame frame = sigcast::read_csv(data_path);
    auto releases = sigcast::target_releases(frame, target);
    if (releases.size() < 5) throw std::runtime_error("too few target observations for an AR(1) baseline");
    const std::size_t n_fit = static_cast<std::size_t>(std::lround(proportion * static_cast<double>(releases.size())));
    if (n_fit < 3 || n_fit >= releases.size())
        throw std::runtime_error("training proportion leaves no usable fit/test split");
    const double fit_until = releases[n_fit - 1].reference_time;
    const double test_start = releases[n_fit].reference_time;
    sigcast::BaselineRun run = sigcast::run_ar1_baseline(frame, target, target_lag, fit_until, test_start,
                                                         frame.timestamps.back());
    sigcast::write_points_csv(out_dir + "/baseline_ar1.csv", run.points, frame.dated);
    sigcast::Evaluation eval = sigcast::evaluate_points(run.points, releases, target_lag);
    sigcast::write_evaluation_json(out_dir + "/baseline_ar1_evaluation.json", eval);
    std::cout << "ar1: intercept=" << run.fit.intercept << " slope=" << run.fit.slope << " rmse=" << eval.rmse
              << " n=" << eval.n << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signature-based nowcasting toolkit"};
    app.require_subcommand(1);

    std::string input, out = "signature.csv", keep = "all";
    int level = 2, t_level = -1;
    bool time_augment = true, basepoint = false;
    auto* sig = app.add_subcommand("sig", "compute the truncated signature of a CSV path");
    sig->add_option("--input", input, "input CSV")->required();
    sig->add_option("--level", level, "truncation level")->required();
    sig->add_option("--t-level", t_level, "pure-time word cutoff (default: level)");
    sig->add_option("--keep", keep, "term filter: all | all_linear | innermost");
    sig->add_flag("--time-augment,!--no-time-augment", time_augment, "prepend the scaled time channel");
    sig->add_flag("--basepoint", basepoint, "prepend a zero basepoint");
    sig->add_option("--out", out, "output CSV");

    std::string regime, sim_out = ".";
    std::uint64_t seed = 20260192ULL;
    int paths = 0;
    auto* simulate = app.add_subcommand("simulate", "run a filter-equivalence simulation regime");
    simulate->add_option("--regime", regime, "regular | subsampled | sigmoid | sigmoid-subsampled")->required();
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--paths", paths, "number of simulated paths (default: regime preset)");
    simulate->add_option("--out", sim_out, "output directory");

    std::string config_path, data_path, nc_out = ".";
    auto* nowcast = app.add_subcommand("nowcast", "run the nowcasting pipeline from a config");
    nowcast->add_option("--config", config_path, "key=value config file")->required();
    nowcast->add_option("--data", data_path, "wide CSV of indicators and target")->required();
    nowcast->add_option("--out", nc_out, "output directory");

    std::string bl_data, bl_target, bl_out = ".";
    double bl_lag = 0, bl_proportion = 0.8;
    auto* baseline = app.add_subcommand("baseline-ar1", "AR(1)-on-previous-release baseline");
    baseline->add_option("--data", bl_data, "wide CSV containing the target")->required();
    baseline->add_option("--target", bl_target, "target column name")->required();
    baseline->add_option("--target-lag", bl_lag, "publication lag in time units");
    baseline->add_option("--proportion", bl_proportion, "fraction of releases used for fitting");
    baseline->add_option("--out", bl_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sig->parsed()) return cmd_sig(input, level, t_level < 0 ? level : t_level, keep, time_augment, basepoint, out);
        if (simulate->parsed()) return cmd_simulate(regime, seed, paths, sim_out);
        if (nowcast->parsed()) return cmd_nowcast(config_path, data_path, nc_out);
        if (baseline->parsed()) return cmd_baseline(bl_data, bl_target, bl_lag, bl_proportion, bl_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
