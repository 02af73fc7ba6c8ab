#ifndef TSF_HARNESS_HPP
#define TSF_HARNESS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/arima.hpp"
#include "tsf/numkit.hpp"
#include "tsf/pipeline.hpp"
#include "tsf/trainer.hpp"

namespace tsf {

enum class ModelKind { Arima, Lstm, BiLstm };

std::string model_kind_name(ModelKind kind);

/// One model evaluated over one test segment. Predictions and actuals are
/// in original units.
struct ForecastRun {
    ModelKind model_kind = ModelKind::Lstm;
    Vec predictions;
    Vec actuals;
    double rmse = 0.0;
    std::optional<LossTrace> loss_trace;
};

/// One comparison-table row. The factory recomputes the percentage fields
/// from the RMSE fields; the plain struct is kept open so externally
/// printed rows can be fed through compare() verbatim.
struct ComparisonRow {
    std::string series;
    double rmse_arima = 0.0;
    double rmse_lstm = 0.0;
    double rmse_bilstm = 0.0;
    double pct_bilstm_over_lstm = 0.0;
    double pct_bilstm_over_arima = 0.0;
    double pct_lstm_over_arima = 0.0;
};

/// Per-epoch descriptive statistics of batch losses.
struct LossStats {
    double min = 0.0;
    double max = 0.0;
    double sd = 0.0;  // population standard deviation
    std::size_t n_batches = 0;
};

double rmse(std::span<const double> actual, std::span<const double> predicted);

/// (new - original) / original * 100. Throws on a zero original.
double pct_change(double new_value, double original_value);

ComparisonRow make_comparison_row(const std::string& series, double rmse_arima,
                                  double rmse_lstm, double rmse_bilstm);

/// Walk-forward validation of a trained network: at every test index the
/// input window is the lookback most recent actual observations (scaled),
/// the prediction is recorded in original units, then the true value is
/// appended to the history. Weights are never updated inside the walk.
/// history_tail_scaled supplies the first window and, for the stateful
/// unidirectional models, the priming pass that rebuilds the carried state
/// before the first prediction.
ForecastRun walk_forward(const Network& net, ModelKind kind, const ScalerStats& scaler,
                         std::size_t lookback, const SeriesFrame& test,
                         std::span<const double> history_tail_scaled);

/// ARIMA counterpart of walk_forward. refit_each_step = true re-estimates
/// on the expanding history per step (rolling_forecast); false keeps the
/// train-time coefficients and only advances the observation tails.
ForecastRun arima_walk(const Vec& train, const SeriesFrame& test, const ArimaOrder& order,
                       bool refit_each_step);

/// Stats over the records of one epoch. Throws if the trace has no records
/// for that epoch.
LossStats loss_stats(const LossTrace& trace, std::size_t epoch);

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    ComparisonRow average;  // arithmetic mean of every column independently
};

/// Builds the report with its average row. Percentage columns are averaged
/// as percentages, not recomputed from the averaged RMSEs; the two disagree
/// whenever RMSE scales differ across series, and the row-mean is the
/// comparison semantics used here.
ComparisonReport compare(std::span<const ComparisonRow> rows);

}  // namespace tsf

#endif  // TSF_HARNESS_HPP
