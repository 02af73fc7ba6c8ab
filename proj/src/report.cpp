#include "tsf/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tsf {
namespace {

using nlohmann::json;

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    return out;
}

json config_json(const ConfigEcho& config) {
    json j = json::object();
    for (const auto& [key, value] : config) j[key] = value;
    return j;
}

json row_json(const ComparisonRow& row) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"series", row.series},
                {"rmse_arima", num(row.rmse_arima)},
                {"rmse_lstm", num(row.rmse_lstm)},
                {"rmse_bilstm", num(row.rmse_bilstm)},
                {"pct_bilstm_over_lstm", num(row.pct_bilstm_over_lstm)},
                {"pct_bilstm_over_arima", num(row.pct_bilstm_over_arima)},
                {"pct_lstm_over_arima", num(row.pct_lstm_over_arima)}};
}

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

void put_cell(std::string& line, const std::string& text, std::size_t width) {
    if (text.size() < width) line.append(width - text.size(), ' ');
    line += text;
}

}  // namespace

void write_loss_trace_csv(const LossTrace& trace, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    trace.to_csv(out);
}

void write_forecast_csv(const ForecastRun& run, const SeriesFrame& test,
                        const std::string& path) {
    if (run.predictions.size() != test.size()) {
        throw std::invalid_argument("write_forecast_csv: " +
                                    std::to_string(run.predictions.size()) +
                                    " predictions for " + std::to_string(test.size()) +
                                    " test rows");
    }
    std::ofstream out = open_or_throw(path);
    out << "timestamp,actual,predicted\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        out << test.timestamps[i] << ',' << double_to_string(run.actuals[i]) << ','
            << double_to_string(run.predictions[i]) << '\n';
    }
}

void write_forecast_report_json(const std::string& path, const ConfigEcho& config,
                                const std::string& series, const ForecastRun& run) {
    json j{{"config", config_json(config)},
           {"series", series},
           {"model", model_kind_name(run.model_kind)},
           {"rmse", run.rmse},
           {"n_test", run.predictions.size()}};
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

void write_comparison_report_json(const std::string& path, const ConfigEcho& config,
                                  const std::vector<ComparisonRow>& rows,
                                  const ComparisonRow* average,
                                  const std::vector<ModelFailure>& failures) {
    json rows_json = json::array();
    for (const ComparisonRow& row : rows) rows_json.push_back(row_json(row));
    json fails = json::array();
    for (const ModelFailure& f : failures) {
        fails.push_back(json{{"series", f.series}, {"model", f.model}, {"error", f.error}});
    }
    json j{{"config", config_json(config)},
           {"rows", rows_json},
           {"average", average ? row_json(*average) : json(nullptr)},
           {"failures", fails}};
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

void write_telemetry_summary_json(const std::string& path, const ConfigEcho& config,
                                  const std::string& series,
                                  const std::vector<EpochStatsRow>& rows) {
    json epochs = json::array();
    for (const EpochStatsRow& row : rows) {
        epochs.push_back(json{{"epoch", row.epoch},
                              {"min", row.stats.min},
                              {"max", row.stats.max},
                              {"sd", row.stats.sd},
                              {"n_batches", row.stats.n_batches}});
    }
    json j{{"config", config_json(config)}, {"series", series}, {"epochs", epochs}};
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

std::string format_comparison_text(const ComparisonReport& report) {
    static const char* headers[] = {"rmse_arima",      "rmse_lstm",      "rmse_bilstm",
                                    "bilstm/lstm %",   "bilstm/arima %", "lstm/arima %"};
    std::size_t name_width = 8;
    for (const ComparisonRow& row : report.rows) name_width = std::max(name_width, row.series.size());
    const std::size_t col = 15;

    std::ostringstream out;
    {
        std::string line(name_width, ' ');
        std::copy_n("series", 6, line.begin());
        for (const char* h : headers) put_cell(line, h, col);
        out << line << '\n';
    }
    auto emit = [&](const ComparisonRow& row) {
        std::string line = row.series;
        line.append(name_width - std::min(name_width, row.series.size()), ' ');
        put_cell(line, fixed(row.rmse_arima, 4), col);
        put_cell(line, fixed(row.rmse_lstm, 4), col);
        put_cell(line, fixed(row.rmse_bilstm, 4), col);
        put_cell(line, fixed(row.pct_bilstm_over_lstm, 2), col);
        put_cell(line, fixed(row.pct_bilstm_over_arima, 2), col);
        put_cell(line, fixed(row.pct_lstm_over_arima, 2), col);
        out << line << '\n';
    };
    for (const ComparisonRow& row : report.rows) emit(row);
    emit(report.average);
    return out.str();
}

std::string format_telemetry_text(const std::vector<EpochStatsRow>& rows) {
    std::ostringstream out;
    out << "epoch            min            max             sd      n_batches\n";
    for (const EpochStatsRow& row : rows) {
        std::string line = std::to_string(row.epoch);
        line.append(5 - std::min<std::size_t>(5, line.size()), ' ');
        put_cell(line, fixed(row.stats.min, 6), 15);
        put_cell(line, fixed(row.stats.max, 6), 15);
        put_cell(line, fixed(row.stats.sd, 6), 15);
        put_cell(line, std::to_string(row.stats.n_batches), 15);
        out << line << '\n';
    }
    return out.str();
}

}  // namespace tsf
