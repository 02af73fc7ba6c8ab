#ifndef TSF_REPORT_HPP
#define TSF_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "tsf/harness.hpp"
#include "tsf/pipeline.hpp"
#include "tsf/trainer.hpp"

namespace tsf {

/// Effective run configuration, echoed into every report for provenance.
/// Flat string map so the echo is format-agnostic and key-ordered.
using ConfigEcho = std::map<std::string, std::string>;

struct ModelFailure {
    std::string series;
    std::string model;
    std::string error;
};

void write_loss_trace_csv(const LossTrace& trace, const std::string& path);

/// Per-step dump (timestamp,actual,predicted), one row per test index;
/// plot-ready replacement for rendered forecast figures.
void write_forecast_csv(const ForecastRun& run, const SeriesFrame& test,
                        const std::string& path);

void write_forecast_report_json(const std::string& path, const ConfigEcho& config,
                                const std::string& series, const ForecastRun& run);

/// average may be null when no series completed all requested models; the
/// failures list still records every per-series model failure.
void write_comparison_report_json(const std::string& path, const ConfigEcho& config,
                                  const std::vector<ComparisonRow>& rows,
                                  const ComparisonRow* average,
                                  const std::vector<ModelFailure>& failures);

struct EpochStatsRow {
    std::size_t epoch;
    LossStats stats;
};

void write_telemetry_summary_json(const std::string& path, const ConfigEcho& config,
                                  const std::string& series,
                                  const std::vector<EpochStatsRow>& rows);

/// Aligned text table, percentages to two decimals.
std::string format_comparison_text(const ComparisonReport& report);

/// Aligned per-epoch min/max/sd/batches table.
std::string format_telemetry_text(const std::vector<EpochStatsRow>& rows);

}  // namespace tsf

#endif  // TSF_REPORT_HPP
