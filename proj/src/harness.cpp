#include "tsf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsf {

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Arima: return "arima";
        case ModelKind::Lstm: return "lstm";
        case ModelKind::BiLstm: return "bilstm";
    }
    return "?";
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty()) {
        throw std::invalid_argument("rmse: empty input");
    }
    if (actual.size() != predicted.size()) {
        throw std::invalid_argument("rmse: " + std::to_string(actual.size()) + " actuals vs " +
                                    std::to_string(predicted.size()) + " predictions");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(actual.size()));
}

double pct_change(double new_value, double original_value) {
    if (original_value == 0.0) {
        throw std::invalid_argument("pct_change: original value is zero");
    }
    return (new_value - original_value) / original_value * 100.0;
}

ComparisonRow make_comparison_row(const std::string& series, double rmse_arima,
                                  double rmse_lstm, double rmse_bilstm) {
    ComparisonRow row;
    row.series = series;
    row.rmse_arima = rmse_arima;
    row.rmse_lstm = rmse_lstm;
    row.rmse_bilstm = rmse_bilstm;
    row.pct_bilstm_over_lstm = pct_change(rmse_bilstm, rmse_lstm);
    row.pct_bilstm_over_arima = pct_change(rmse_bilstm, rmse_arima);
    row.pct_lstm_over_arima = pct_change(rmse_lstm, rmse_arima);
    return row;
}

ForecastRun walk_forward(const Network& net, ModelKind kind, const ScalerStats& scaler,
                         std::size_t lookback, const SeriesFrame& test,
                         std::span<const double> history_tail_scaled) {
    if (test.size() == 0) {
        throw std::invalid_argument("walk_forward: empty test segment");
    }
    if (history_tail_scaled.size() < lookback) {
        throw std::invalid_argument("walk_forward: history tail has " +
                                    std::to_string(history_tail_scaled.size()) +
                                    " values, lookback needs " + std::to_string(lookback));
    }

    // Stateful kinds walk with carried state, primed by a prediction pass
    // over the supplied history (the training windows); that reproduces the
    // state a stateful training run ends an epoch with. The bidirectional
    // model runs every window from zero state.
    CellState state = CellState::zero(net.hidden);
    CellState* io_state = net.kind == CellKind::BiLstm ? nullptr : &state;
    for (std::size_t start = 0; start + lookback < history_tail_scaled.size(); ++start) {
        (void)predict_window(net, history_tail_scaled.subspan(start, lookback), io_state);
    }

    Vec window(history_tail_scaled.end() - static_cast<std::ptrdiff_t>(lookback),
               history_tail_scaled.end());
    ForecastRun run;
    run.model_kind = kind;
    run.actuals = test.values;
    run.predictions.reserve(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) {
        const double pred_scaled = predict_window(net, window, io_state);
        run.predictions.push_back(scaler.inverse(pred_scaled));
        // Slide the window onto the true observation, never the prediction.
        window.erase(window.begin());
        window.push_back(scaler.scale(test.values[k]));
    }
    run.rmse = rmse(run.actuals, run.predictions);
    return run;
}

ForecastRun arima_walk(const Vec& train, const SeriesFrame& test, const ArimaOrder& order,
                       bool refit_each_step) {
    if (test.size() == 0) {
        throw std::invalid_argument("arima_walk: empty test segment");
    }
    ForecastRun run;
    run.model_kind = ModelKind::Arima;
    run.actuals = test.values;
    if (refit_each_step) {
        run.predictions = rolling_forecast(train, test.values, order);
    } else {
        ArimaModel m = fit_arima(train, order);
        run.predictions.reserve(test.size());
        for (double y : test.values) {
            run.predictions.push_back(forecast_one(m));
            update_with_observation(m, y);
        }
    }
    run.rmse = rmse(run.actuals, run.predictions);
    return run;
}

LossStats loss_stats(const LossTrace& trace, std::size_t epoch) {
    Vec losses;
    for (const LossRecord& r : trace.records) {
        if (r.epoch == epoch) losses.push_back(r.loss);
    }
    if (losses.empty()) {
        throw std::invalid_argument("loss_stats: trace has no records for epoch " +
                                    std::to_string(epoch));
    }
    LossStats stats;
    stats.n_batches = losses.size();
    stats.min = *std::min_element(losses.begin(), losses.end());
    stats.max = *std::max_element(losses.begin(), losses.end());
    double mean = 0.0;
    for (double v : losses) mean += v;
    mean /= static_cast<double>(losses.size());
    double var = 0.0;
    for (double v : losses) var += (v - mean) * (v - mean);
    var /= static_cast<double>(losses.size());
    stats.sd = std::sqrt(var);
    return stats;
}

ComparisonReport compare(std::span<const ComparisonRow> rows) {
    if (rows.empty()) {
        throw std::invalid_argument("compare: no rows");
    }
    ComparisonReport report;
    report.rows.assign(rows.begin(), rows.end());
    ComparisonRow& avg = report.average;
    avg.series = "average";
    const double n = static_cast<double>(rows.size());
    for (const ComparisonRow& r : rows) {
        avg.rmse_arima += r.rmse_arima / n;
        avg.rmse_lstm += r.rmse_lstm / n;
        avg.rmse_bilstm += r.rmse_bilstm / n;
        avg.pct_bilstm_over_lstm += r.pct_bilstm_over_lstm / n;
        avg.pct_bilstm_over_arima += r.pct_bilstm_over_arima / n;
        avg.pct_lstm_over_arima += r.pct_lstm_over_arima / n;
    }
    return report;
}

}  // namespace tsf
