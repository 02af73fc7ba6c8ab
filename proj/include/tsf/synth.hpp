#ifndef TSF_SYNTH_HPP
#define TSF_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tsf/pipeline.hpp"

namespace tsf {

/// Deterministic synthetic series. Every generator is pure in (kind, seed,
/// n), so the bundled CSVs under data/ can be regenerated bit-identically.
enum class SynthKind {
    Price,        // geometric random walk with drift, price-like
    TanhMeanRev,  // saturating mean reversion
    SineMap,      // noisy one-dimensional sine map
    RegimeDrift,  // drift that flips sign around a level
    BumpMap,      // near-unit-root with a localized nonlinear bump
    SineMeanRev,  // sinusoidal restoring force
};

SeriesFrame make_synth_series(SynthKind kind, std::uint64_t seed, std::size_t n);

struct BundledSeries {
    std::string name;  // file stem under data/
    SynthKind kind;
    std::uint64_t seed;
    std::size_t n;
};

/// The canonical bundled set: one long price series for loss telemetry and
/// five autocorrelated nonlinear series for model comparison.
std::vector<BundledSeries> bundled_series();

/// Yahoo-export layout (Date,Open,High,Low,Close,Adj Close,Volume); the
/// OHLC columns are deterministic dressing around the series value.
void write_series_csv(const SeriesFrame& frame, const std::string& path);

}  // namespace tsf

#endif  // TSF_SYNTH_HPP
