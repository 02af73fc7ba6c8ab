#ifndef TSF_PIPELINE_HPP
#define TSF_PIPELINE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsf/numkit.hpp"

namespace tsf {

/// Ordered univariate series. Timestamps are ISO-8601 dates (YYYY-MM-DD),
/// strictly increasing after ingestion, so lexicographic order is
/// chronological order.
struct SeriesFrame {
    std::string name;
    std::vector<std::string> timestamps;
    Vec values;
    std::size_t dropped_rows = 0;  // rows discarded at ingestion (empty / "null" cells)

    std::size_t size() const { return values.size(); }
};

struct SplitSpec {
    double train_fraction = 0.70;
    std::size_t train_len = 0;
    std::size_t test_len = 0;
};

/// Affine [-1,1] scaling fitted on the training segment only.
struct ScalerStats {
    double min = 0.0;
    double max = 0.0;

    double scale(double x) const { return 2.0 * (x - min) / (max - min) - 1.0; }
    double inverse(double s) const { return (s + 1.0) * 0.5 * (max - min) + min; }
};

/// One-step-ahead supervised framing: X[i] is the lookback window ending
/// just before target y[i].
struct SupervisedSet {
    std::vector<Vec> x;  // windows, each of length lookback
    Vec y;               // next-step targets
    std::size_t lookback = 0;

    std::size_t size() const { return y.size(); }
};

/// Parses Date plus the named value column from a Yahoo-finance-layout CSV
/// (RFC-4180 quoting). Rows whose value cell is empty or "null" are dropped
/// and counted; surviving rows are sorted by date. Throws on a missing
/// column, an unparseable date, a duplicate date, or fewer than min_rows
/// usable rows (30 by default, the floor below which a split/fit is
/// meaningless).
SeriesFrame load_series(const std::string& path, const std::string& column_name,
                        std::size_t min_rows = 30);

/// Chronological lengths for an N-point series: train gets floor(N*fraction).
SplitSpec split_spec(std::size_t n, double fraction);

/// Chronological split, no shuffling. Throws if either side would be empty.
std::pair<SeriesFrame, SeriesFrame> split(const SeriesFrame& series, double fraction);

struct ScaledSplit {
    Vec train;
    Vec test;
    ScalerStats stats;
};

/// Fits min/max on train, maps both segments with the same affine map.
/// Test values outside the train range land outside [-1,1]; that is the
/// point of fitting on train only. Throws on a constant training segment.
ScaledSplit scale_fit_transform(const Vec& train, const Vec& test);

/// Slides a lookback window over the series: X[i] = values[i..i+lookback),
/// y[i] = values[i+lookback].
SupervisedSet to_supervised(const Vec& values, std::size_t lookback);

}  // namespace tsf

#endif  // TSF_PIPELINE_HPP
