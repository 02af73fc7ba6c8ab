// Command-line front end: forecast / compare / telemetry subcommands tying
// ingestion, training and evaluation together. All defaults mirror the
// library defaults so a bare invocation is reproducible.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsf/arima.hpp"
#include "tsf/harness.hpp"
#include "tsf/pipeline.hpp"
#include "tsf/report.hpp"
#include "tsf/trainer.hpp"

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct CommonOpts {
    std::string column = "Adj Close";
    double split = 0.7;
    std::size_t lookback = 1;
    std::size_t epochs = 1;
    std::size_t neurons = 4;
    std::size_t batch_size = 32;
    double clip_norm = 5.0;
    std::uint64_t seed = 7;
    std::vector<std::size_t> arima_order = {5, 1, 0};
    std::string rolling = "default";  // default | listing | retrain
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--column", opts.column, "Value column to forecast")
        ->capture_default_str();
    cmd->add_option("--split", opts.split, "Chronological train fraction")
        ->check(CLI::Range(0.01, 0.99))
        ->capture_default_str();
    cmd->add_option("--lookback", opts.lookback, "Input window length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--epochs", opts.epochs, "Training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--neurons", opts.neurons, "Recurrent hidden width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--batch-size", opts.batch_size, "Training batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--clip-norm", opts.clip_norm, "Global gradient-norm cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    cmd->add_option("--arima-order", opts.arima_order, "ARIMA order p,d,q")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    cmd->add_option("--rolling", opts.rolling,
                    "Walk-forward refit policy: default (ARIMA refits, neural models do not), "
                    "listing (nobody refits), retrain (everybody refits)")
        ->check(CLI::IsMember({"default", "listing", "retrain"}))
        ->capture_default_str();
}

tsf::TrainConfig train_config(const CommonOpts& opts) {
    tsf::TrainConfig cfg;
    cfg.epochs = opts.epochs;
    cfg.neurons = opts.neurons;
    cfg.batch_size = opts.batch_size;
    cfg.lookback = opts.lookback;
    cfg.clip_norm = opts.clip_norm;
    cfg.seed = opts.seed;
    return cfg;
}

tsf::ArimaOrder arima_order(const CommonOpts& opts) {
    return tsf::ArimaOrder{opts.arima_order[0], opts.arima_order[1], opts.arima_order[2]};
}

tsf::ConfigEcho config_echo(const CommonOpts& opts, const std::string& input,
                            const std::string& models) {
    tsf::ConfigEcho echo;
    echo["input"] = input;
    echo["column"] = opts.column;
    echo["models"] = models;
    echo["split"] = tsf::double_to_string(opts.split);
    echo["lookback"] = std::to_string(opts.lookback);
    echo["epochs"] = std::to_string(opts.epochs);
    echo["neurons"] = std::to_string(opts.neurons);
    echo["batch_size"] = std::to_string(opts.batch_size);
    echo["clip_norm"] = tsf::double_to_string(opts.clip_norm);
    echo["seed"] = std::to_string(opts.seed);
    echo["arima_order"] = std::to_string(opts.arima_order[0]) + "," +
                          std::to_string(opts.arima_order[1]) + "," +
                          std::to_string(opts.arima_order[2]);
    echo["rolling"] = opts.rolling;
    return echo;
}

void print_config(const tsf::ConfigEcho& echo) {
    std::cout << "config:";
    for (const auto& [key, value] : echo) std::cout << ' ' << key << '=' << value;
    std::cout << '\n';
}

struct NeuralResult {
    tsf::ForecastRun run;
    tsf::LossTrace trace;
};

NeuralResult run_neural(tsf::ModelKind kind, const tsf::SeriesFrame& train,
                        const tsf::SeriesFrame& test, const CommonOpts& opts) {
    const tsf::ModelOption option =
        kind == tsf::ModelKind::Lstm ? tsf::ModelOption::Lstm : tsf::ModelOption::BiLstm;
    const tsf::TrainConfig cfg = train_config(opts);
    tsf::ScaledSplit scaled = tsf::scale_fit_transform(train.values, test.values);

    NeuralResult result;
    if (opts.rolling == "retrain") {
        // Per-step refit from scratch on the expanding (scaled) history; the
        // scaler stays fitted on the original training segment.
        tsf::Vec history = scaled.train;
        result.run.model_kind = kind;
        result.run.actuals = test.values;
        for (std::size_t k = 0; k < test.size(); ++k) {
            tsf::FitResult fr = tsf::fit(option, tsf::to_supervised(history, cfg.lookback), cfg);
            if (k == 0) result.trace = fr.trace;
            const std::span<const double> window{history.data() + history.size() - cfg.lookback,
                                                 cfg.lookback};
            result.run.predictions.push_back(
                scaled.stats.inverse(tsf::predict_window(fr.net, window)));
            history.push_back(scaled.stats.scale(test.values[k]));
        }
        result.run.rmse = tsf::rmse(result.run.actuals, result.run.predictions);
    } else {
        tsf::FitResult fr = tsf::fit(option, tsf::to_supervised(scaled.train, cfg.lookback), cfg);
        result.trace = fr.trace;
        result.run =
            tsf::walk_forward(fr.net, kind, scaled.stats, cfg.lookback, test, scaled.train);
    }
    result.run.loss_trace = result.trace;
    return result;
}

tsf::ForecastRun run_model(tsf::ModelKind kind, const tsf::SeriesFrame& train,
                           const tsf::SeriesFrame& test, const CommonOpts& opts) {
    if (kind == tsf::ModelKind::Arima) {
        const bool refit = opts.rolling != "listing";
        tsf::ForecastRun run = tsf::arima_walk(train.values, test, arima_order(opts), refit);
        if (!refit) {
            // Single fit: surface the stationarity warning that rolling mode
            // would emit per step.
            tsf::ArimaModel m = tsf::fit_arima(train.values, arima_order(opts));
            if (m.stationarity_warning) {
                std::cerr << "warning: fitted AR polynomial has a root inside the unit circle\n";
            }
        }
        return run;
    }
    return run_neural(kind, train, test, opts).run;
}

tsf::ModelKind parse_model(const std::string& name) {
    if (name == "arima") return tsf::ModelKind::Arima;
    if (name == "lstm") return tsf::ModelKind::Lstm;
    if (name == "bilstm") return tsf::ModelKind::BiLstm;
    throw std::invalid_argument("unknown model '" + name + "'");
}

int cmd_forecast(const std::string& input, const std::string& model, const CommonOpts& opts,
                 const std::string& out_csv, const std::string& report_path) {
    const tsf::SeriesFrame frame = tsf::load_series(input, opts.column);
    std::cout << "loaded " << frame.name << ": " << frame.size() << " rows ("
              << frame.dropped_rows << " dropped)\n";
    const tsf::ConfigEcho echo = config_echo(opts, input, model);
    print_config(echo);

    auto [train, test] = tsf::split(frame, opts.split);
    const tsf::ForecastRun run = run_model(parse_model(model), train, test, opts);

    tsf::write_forecast_csv(run, test, out_csv);
    tsf::write_forecast_report_json(report_path, echo, frame.name, run);
    std::cout << "rmse " << tsf::double_to_string(run.rmse) << '\n';
    return 0;
}

int cmd_compare(const std::vector<std::string>& inputs, std::vector<std::string> models,
                const CommonOpts& opts, const std::string& report_path) {
    std::string models_echo;
    for (const std::string& m : models) {
        parse_model(m);  // validate early
        if (!models_echo.empty()) models_echo += ',';
        models_echo += m;
    }
    const tsf::ConfigEcho echo = config_echo(opts, inputs.size() == 1 ? inputs[0] : "(multiple)",
                                             models_echo);
    print_config(echo);

    auto has = [&](const std::string& m) {
        return std::find(models.begin(), models.end(), m) != models.end();
    };
    auto safe_pct = [](double nv, double ov) {
        return std::isfinite(nv) && std::isfinite(ov) && ov != 0.0 ? tsf::pct_change(nv, ov)
                                                                   : kNan;
    };

    std::vector<tsf::ComparisonRow> rows;
    std::vector<tsf::ModelFailure> failures;
    for (const std::string& input : inputs) {
        const tsf::SeriesFrame frame = tsf::load_series(input, opts.column);
        auto [train, test] = tsf::split(frame, opts.split);

        tsf::ComparisonRow row;
        row.series = frame.name;
        row.rmse_arima = row.rmse_lstm = row.rmse_bilstm = kNan;
        bool row_ok = true;
        for (const std::string& name : models) {
            try {
                const tsf::ForecastRun run = run_model(parse_model(name), train, test, opts);
                if (name == "arima") row.rmse_arima = run.rmse;
                if (name == "lstm") row.rmse_lstm = run.rmse;
                if (name == "bilstm") row.rmse_bilstm = run.rmse;
            } catch (const std::exception& e) {
                failures.push_back(tsf::ModelFailure{frame.name, name, e.what()});
                row_ok = false;
            }
        }
        if (!row_ok) continue;  // incomplete rows go to failures, not the table
        if (has("lstm") && has("bilstm"))
            row.pct_bilstm_over_lstm = safe_pct(row.rmse_bilstm, row.rmse_lstm);
        else
            row.pct_bilstm_over_lstm = kNan;
        if (has("arima") && has("bilstm"))
            row.pct_bilstm_over_arima = safe_pct(row.rmse_bilstm, row.rmse_arima);
        else
            row.pct_bilstm_over_arima = kNan;
        if (has("arima") && has("lstm"))
            row.pct_lstm_over_arima = safe_pct(row.rmse_lstm, row.rmse_arima);
        else
            row.pct_lstm_over_arima = kNan;
        rows.push_back(row);
    }

    if (rows.empty()) {
        tsf::write_comparison_report_json(report_path, echo, rows, nullptr, failures);
        for (const tsf::ModelFailure& f : failures) {
            std::cerr << "failed: " << f.series << '/' << f.model << ": " << f.error << '\n';
        }
        std::cerr << "tsforecast: no series completed all requested models\n";
        return 1;
    }

    const tsf::ComparisonReport report = tsf::compare(rows);
    std::cout << tsf::format_comparison_text(report);
    tsf::write_comparison_report_json(report_path, echo, report.rows, &report.average, failures);
    for (const tsf::ModelFailure& f : failures) {
        std::cerr << "failed: " << f.series << '/' << f.model << ": " << f.error << '\n';
    }
    return failures.empty() ? 0 : 1;
}

int cmd_telemetry(const std::string& input, const std::string& model, const CommonOpts& opts,
                  const std::string& trace_path, const std::string& summary_path) {
    const tsf::ModelKind kind = parse_model(model);
    if (kind == tsf::ModelKind::Arima) {
        throw std::invalid_argument("telemetry: model must be lstm or bilstm");
    }
    const tsf::SeriesFrame frame = tsf::load_series(input, opts.column);
    std::cout << "loaded " << frame.name << ": " << frame.size() << " rows ("
              << frame.dropped_rows << " dropped)\n";
    const tsf::ConfigEcho echo = config_echo(opts, input, model);
    print_config(echo);

    auto [train, test] = tsf::split(frame, opts.split);
    const tsf::TrainConfig cfg = train_config(opts);
    const tsf::ScaledSplit scaled = tsf::scale_fit_transform(train.values, test.values);
    const tsf::ModelOption option =
        kind == tsf::ModelKind::Lstm ? tsf::ModelOption::Lstm : tsf::ModelOption::BiLstm;
    const tsf::FitResult fr = tsf::fit(option, tsf::to_supervised(scaled.train, cfg.lookback), cfg);

    tsf::write_loss_trace_csv(fr.trace, trace_path);
    std::vector<tsf::EpochStatsRow> summary;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        summary.push_back(tsf::EpochStatsRow{epoch, tsf::loss_stats(fr.trace, epoch)});
    }
    std::cout << tsf::format_telemetry_text(summary);
    tsf::write_telemetry_summary_json(summary_path, echo, frame.name, summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series forecasting and model comparison (ARIMA / LSTM / BiLSTM)"};
    app.require_subcommand(1);
    // Flags beat config-file values, which beat defaults. Subcommand options
    // live in an INI section named after the subcommand.
    app.set_config("--config", "", "Read options from an INI file ([subcommand] sections)");

    CommonOpts opts;

    auto* forecast = app.add_subcommand("forecast", "Train one model and walk the test segment");
    std::string fc_input, fc_model;
    std::string fc_out = "forecast.csv", fc_report = "forecast_report.json";
    forecast->add_option("--input", fc_input, "Input CSV")->required();
    forecast->add_option("--model", fc_model, "arima, lstm or bilstm")
        ->required()
        ->check(CLI::IsMember({"arima", "lstm", "bilstm"}));
    forecast->add_option("--out", fc_out, "Per-step forecast CSV")->capture_default_str();
    forecast->add_option("--report", fc_report, "JSON result file")->capture_default_str();
    add_common_flags(forecast, opts);

    auto* comparec = app.add_subcommand("compare", "Run several models and tabulate RMSEs");
    std::vector<std::string> cp_inputs;
    std::vector<std::string> cp_models = {"arima", "lstm", "bilstm"};
    std::string cp_report = "compare_report.json";
    comparec->add_option("--input", cp_inputs, "Input CSV (repeatable)")->required();
    comparec->add_option("--models", cp_models, "Models to compare")
        ->delimiter(',')
        ->capture_default_str();
    comparec->add_option("--report", cp_report, "JSON report file")->capture_default_str();
    add_common_flags(comparec, opts);

    auto* telemetry = app.add_subcommand("telemetry", "Per-batch loss trace and epoch stats");
    std::string tm_input, tm_model = "lstm";
    std::string tm_trace = "loss_trace.csv", tm_summary = "telemetry_summary.json";
    telemetry->add_option("--input", tm_input, "Input CSV")->required();
    telemetry->add_option("--model", tm_model, "lstm or bilstm")
        ->check(CLI::IsMember({"lstm", "bilstm"}))
        ->capture_default_str();
    telemetry->add_option("--trace", tm_trace, "Per-batch loss CSV")->capture_default_str();
    telemetry->add_option("--summary", tm_summary, "Per-epoch stats JSON")->capture_default_str();
    add_common_flags(telemetry, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (forecast->parsed()) {
            return cmd_forecast(fc_input, fc_model, opts, fc_out, fc_report);
        }
        if (comparec->parsed()) {
            if (cp_models.size() < 2) {
                throw std::invalid_argument("compare needs at least two models");
            }
            return cmd_compare(cp_inputs, cp_models, opts, cp_report);
        }
        if (telemetry->parsed()) {
            return cmd_telemetry(tm_input, tm_model, opts, tm_trace, tm_summary);
        }
    } catch (const std::exception& e) {
        std::cerr << "tsforecast: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
