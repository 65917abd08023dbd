// pluvia: univariate monthly-precipitation forecasting pipeline.
// Subcommands: stats, train, evaluate, forecast, gradcheck.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pluvia/pluvia.hpp"

namespace fs = std::filesystem;
using namespace pluvia;

namespace {

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
}

MonthlySeries load_cleaned(const std::string& input, const std::string& format) {
    const MonthlySeries raw = load_series(input, series_format_from_name(format));
    return clean_missing(raw);
}

struct StatsOpts {
    std::string input, format = "long", out = "out";
    bool svg = false;
};

int cmd_stats(const StatsOpts& opts) {
    const MonthlySeries cleaned = load_cleaned(opts.input, opts.format);
    if (cleaned.empty()) throw DataError("no data rows in " + opts.input);
    for (const std::string& w : cleaned.warnings) std::cerr << "pluvia: warning: " << w << "\n";

    const MonthlyStats stats = monthly_boxplot_stats(cleaned);
    const YearlyTrendTable trend = yearly_trend_table(cleaned);
    const std::string stats_csv = monthly_stats_csv(stats);
    const std::string trend_csv = yearly_trend_csv(trend);

    ensure_out_dir(opts.out);
    write_text_file(out_path(opts.out, "monthly_stats.csv"), stats_csv);
    write_text_file(out_path(opts.out, "yearly_trend.csv"), trend_csv);
    if (opts.svg) {
        write_text_file(out_path(opts.out, "boxplot.svg"),
                        svg_boxplot(stats, "Monthly precipitation distribution"));
        write_text_file(out_path(opts.out, "trend.svg"),
                        svg_trend(trend, "Yearly precipitation by month"));
    }
    std::cout << "cleaned " << cleaned.gap_indices.size() << " missing value(s)\n";
    std::cout << "wrote " << out_path(opts.out, "monthly_stats.csv") << " and "
              << out_path(opts.out, "yearly_trend.csv") << "\n";
    return 0;
}

struct TrainOpts {
    std::string config;
    std::string input, out;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_train(const TrainOpts& opts) {
    RunConfig cfg = load_run_config(opts.config);
    if (!opts.input.empty()) cfg.data_path = opts.input;
    if (!opts.out.empty()) cfg.output_dir = opts.out;
    if (opts.seed_set) cfg.training.seed = opts.seed;
    if (cfg.data_path.empty()) {
        throw ConfigError("config: data.path is required for training (or pass --input)");
    }

    const MonthlySeries cleaned = clean_missing(load_series(cfg.data_path, cfg.format));
    for (const std::string& w : cleaned.warnings) std::cerr << "pluvia: warning: " << w << "\n";
    const std::size_t cut = split_point(cleaned.size(), cfg.split_fraction);

    ModelConfig mc = cfg.model;
    if (mc.output_scale <= 0.0) {
        double mx = 0.0;
        for (std::size_t i = 0; i < cut; ++i) mx = std::max(mx, cleaned.points[i].precip_mm);
        mc.output_scale = mx > 0.0 ? mx : 1.0;
    }

    CnnLstmModel model = build_model(mc, cfg.training.seed);
    const WindowedDataset all = make_windows(cleaned, mc.window_size, mc.output_scale,
                                             cfg.strict_gap_windows);
    auto [train_ds, test_ds] = split_windows(all, cut);
    if (train_ds.windows.empty()) {
        throw DataError("training split yields no windows (series of " +
                        std::to_string(cleaned.size()) + " months, window " +
                        std::to_string(mc.window_size) + ")");
    }

    std::cout << "training on " << train_ds.windows.size() << " windows (" << test_ds.windows.size()
              << " held out), scale=" << mc.output_scale << "\n";
    std::cout << "epoch,loss,lr,seconds\n";
    const TrainingHistory history = train(model, train_ds, cfg.training, &std::cout);

    ensure_out_dir(cfg.output_dir);
    Checkpoint cp;
    cp.model = std::move(model);
    cp.training = cfg.training;
    cp.seed = cfg.training.seed;
    save_checkpoint(out_path(cfg.output_dir, "checkpoint.json"), cp);
    write_text_file(out_path(cfg.output_dir, "history.csv"), history_csv(history));
    std::cout << "wrote " << out_path(cfg.output_dir, "checkpoint.json") << " and "
              << out_path(cfg.output_dir, "history.csv") << "\n";
    return 0;
}

struct EvaluateOpts {
    std::string checkpoint, input, format = "long", out = "out", config;
    double split = 0.8;
};

int cmd_evaluate(const EvaluateOpts& opts) {
    const Checkpoint cp = load_checkpoint(opts.checkpoint);
    if (!opts.config.empty()) {
        const RunConfig rc = load_run_config(opts.config);
        if (rc.model.window_size != cp.model.config.window_size) {
            throw ConfigError("window-size mismatch: checkpoint has " +
                              std::to_string(cp.model.config.window_size) + ", config has " +
                              std::to_string(rc.model.window_size));
        }
    }
    const MonthlySeries cleaned = load_cleaned(opts.input, opts.format);
    const EvalReport report = evaluate(cp.model, cleaned, opts.split);

    ensure_out_dir(opts.out);
    write_text_file(out_path(opts.out, "evaluation.csv"), evaluation_csv(report));
    write_text_file(out_path(opts.out, "summary.csv"), summary_csv(report));
    std::cout << "model rmse=" << fmt_g17(report.scores[0].rmse)
              << " mse=" << fmt_g17(report.scores[0].mse) << "\n";
    return 0;
}

struct ForecastOpts {
    std::string checkpoint, input, format = "long", out = "out";
    bool svg = false;
};

int cmd_forecast(const ForecastOpts& opts) {
    const Checkpoint cp = load_checkpoint(opts.checkpoint);
    const MonthlySeries cleaned = load_cleaned(opts.input, opts.format);
    const std::vector<ForecastRow> rows = forecast_rows(cp.model, cleaned);

    ensure_out_dir(opts.out);
    write_text_file(out_path(opts.out, "forecast.csv"), forecast_csv(rows));
    if (opts.svg) {
        write_text_file(out_path(opts.out, "forecast.svg"),
                        svg_forecast(rows, "Actual vs predicted precipitation"));
    }
    std::cout << "wrote " << rows.size() << " forecast row(s) to "
              << out_path(opts.out, "forecast.csv") << "\n";
    return 0;
}

int cmd_gradcheck(std::uint64_t seed) {
    const auto results = run_gradient_checks(seed);
    bool ok = true;
    for (const GradCheckResult& r : results) {
        const bool pass = r.max_rel_err < kGradCheckTolerance;
        ok = ok && pass;
        std::printf("%-13s max_rel_err=%.3e cases=%zu %s\n", r.layer.c_str(), r.max_rel_err,
                    r.cases, pass ? "ok" : "FAIL");
    }
    if (!ok) throw NumericError("gradient check failed (tolerance 1e-4)");
    return 0;
}

std::string single_line(std::string msg) {
    for (char& c : msg) {
        if (c == '\n') c = ';';
    }
    return msg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pluvia: monthly precipitation forecasting (CNN-LSTM)"};
    app.require_subcommand(1);

    StatsOpts stats_opts;
    auto* stats = app.add_subcommand("stats", "Descriptive statistics CSVs (and optional SVGs)");
    stats->add_option("--input", stats_opts.input, "Input CSV path")->required();
    stats->add_option("--format", stats_opts.format, "Input layout: wide or long");
    stats->add_option("--out", stats_opts.out, "Output directory");
    stats->add_flag("--svg", stats_opts.svg, "Also render SVG charts");

    TrainOpts train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train a model from a JSON run config");
    train_cmd->add_option("--config", train_opts.config, "RunConfig JSON path")->required();
    train_cmd->add_option("--input", train_opts.input, "Override data path");
    train_cmd->add_option("--out", train_opts.out, "Override output directory");
    auto* seed_opt = train_cmd->add_option("--seed", train_opts.seed, "Override training seed");

    EvaluateOpts eval_opts;
    auto* eval_cmd = app.add_subcommand("evaluate", "Walk-forward test-split evaluation");
    eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "Checkpoint JSON path")->required();
    eval_cmd->add_option("--input", eval_opts.input, "Input CSV path")->required();
    eval_cmd->add_option("--format", eval_opts.format, "Input layout: wide or long");
    eval_cmd->add_option("--split", eval_opts.split, "Train fraction of the chronological split");
    eval_cmd->add_option("--out", eval_opts.out, "Output directory");
    eval_cmd->add_option("--config", eval_opts.config, "Optional RunConfig to cross-check");

    ForecastOpts fc_opts;
    auto* fc_cmd = app.add_subcommand("forecast", "Walk-forward forecasts over the whole series");
    fc_cmd->add_option("--checkpoint", fc_opts.checkpoint, "Checkpoint JSON path")->required();
    fc_cmd->add_option("--input", fc_opts.input, "Input CSV path")->required();
    fc_cmd->add_option("--format", fc_opts.format, "Input layout: wide or long");
    fc_cmd->add_option("--out", fc_opts.out, "Output directory");
    fc_cmd->add_flag("--svg", fc_opts.svg, "Also render the overlay chart");

    std::uint64_t gradcheck_seed = 42;
    auto* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every layer");
    gc_cmd->add_option("--seed", gradcheck_seed, "Seed for the random cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*stats) return cmd_stats(stats_opts);
        if (*train_cmd) {
            train_opts.seed_set = seed_opt->count() > 0;
            return cmd_train(train_opts);
        }
        if (*eval_cmd) return cmd_evaluate(eval_opts);
        if (*fc_cmd) return cmd_forecast(fc_opts);
        if (*gc_cmd) return cmd_gradcheck(gradcheck_seed);
    } catch (const Error& e) {
        std::cerr << "pluvia: error[" << error_kind_name(e.kind()) << "]: "
                  << single_line(e.what()) << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "pluvia: error[internal]: " << single_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}
