#include "tsf/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "tsf/numkit.hpp"

namespace tsf {
namespace {

struct Date {
    int y, m, d;
};

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int base[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap(y)) return 29;
    return base[m - 1];
}

// Sakamoto's day-of-week; 0 = Sunday.
int weekday(const Date& dt) {
    static const int t[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    int y = dt.y - (dt.m < 3 ? 1 : 0);
    return (y + y / 4 - y / 100 + y / 400 + t[dt.m - 1] + dt.d) % 7;
}

void advance_to_next_weekday(Date& dt) {
    do {
        if (++dt.d > days_in_month(dt.y, dt.m)) {
            dt.d = 1;
            if (++dt.m > 12) {
                dt.m = 1;
                ++dt.y;
            }
        }
    } while (weekday(dt) == 0 || weekday(dt) == 6);
}

std::string iso(const Date& dt) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", dt.y, dt.m, dt.d);
    return buf;
}

SeriesFrame frame_from_values(const Vec& values, const std::string& name) {
    SeriesFrame frame;
    frame.name = name;
    frame.values = values;
    frame.timestamps.reserve(values.size());
    Date dt{2010, 1, 4};  // a Monday
    for (std::size_t i = 0; i < values.size(); ++i) {
        frame.timestamps.push_back(iso(dt));
        advance_to_next_weekday(dt);
    }
    return frame;
}

}  // namespace

SeriesFrame make_synth_series(SynthKind kind, std::uint64_t seed, std::size_t n) {
    if (n < 30) {
        throw std::invalid_argument("make_synth_series: need at least 30 points");
    }
    Rng rng(seed);
    Vec v(n);
    switch (kind) {
        case SynthKind::Price: {
            // Range-bound instrument with a three-day microstructure bounce
            // riding on a slow autoregressive drift of the log level.
            static const double bounce_phase[3] = {1.0, -0.3, -0.7};
            double drift = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                drift = 0.6 * drift + 0.005 * rng.next_gaussian();
                v[t] = 100.0 * std::exp(0.02 * bounce_phase[t % 3] + drift);
            }
            break;
        }
        case SynthKind::TanhMeanRev: {
            double x = 50.0;
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = x;
                x += -1.6 * std::tanh(0.45 * (x - 50.0)) + 0.9 * rng.next_gaussian();
            }
            break;
        }
        case SynthKind::SineMap: {
            double x = 52.0;
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = x;
                x = 50.0 + 11.0 * std::sin(0.55 * (x - 50.0)) + 0.5 * rng.next_gaussian();
            }
            break;
        }
        case SynthKind::RegimeDrift: {
            double x = 50.0;
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = x;
                x += (x < 50.0 ? 1.1 : -1.1) + 0.55 * rng.next_gaussian();
            }
            break;
        }
        case SynthKind::BumpMap: {
            double x = 50.0;
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = x;
                const double dev = x - 50.0;
                x = 50.0 + 0.85 * dev + 6.0 * std::exp(-0.18 * (dev - 4.0) * (dev - 4.0)) -
                    3.0 + 0.5 * rng.next_gaussian();
            }
            break;
        }
        case SynthKind::SineMeanRev: {
            double x = 55.0;
            for (std::size_t t = 0; t < n; ++t) {
                v[t] = x;
                x += 2.4 * std::sin(0.4 * (52.0 - x)) + 0.55 * rng.next_gaussian();
            }
            break;
        }
    }
    std::string name;
    switch (kind) {
        case SynthKind::Price: name = "synthetic_price"; break;
        case SynthKind::TanhMeanRev: name = "nonlinear_tanh"; break;
        case SynthKind::SineMap: name = "nonlinear_sine_map"; break;
        case SynthKind::RegimeDrift: name = "nonlinear_regime"; break;
        case SynthKind::BumpMap: name = "nonlinear_bump"; break;
        case SynthKind::SineMeanRev: name = "nonlinear_sine_rev"; break;
    }
    return frame_from_values(v, name);
}

std::vector<BundledSeries> bundled_series() {
    return {
        {"synthetic_price", SynthKind::Price, 57, 1800},
        {"nonlinear_tanh", SynthKind::TanhMeanRev, 101, 700},
        {"nonlinear_sine_map", SynthKind::SineMap, 102, 700},
        {"nonlinear_regime", SynthKind::RegimeDrift, 103, 700},
        {"nonlinear_bump", SynthKind::BumpMap, 104, 700},
        {"nonlinear_sine_rev", SynthKind::SineMeanRev, 105, 700},
    };
}

void write_series_csv(const SeriesFrame& frame, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_series_csv: cannot open '" + path + "'");
    }
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (std::size_t i = 0; i < frame.size(); ++i) {
        const double close = frame.values[i];
        const double open = i > 0 ? frame.values[i - 1] : close;
        const double high = std::max(open, close) * 1.004;
        const double low = std::min(open, close) * 0.996;
        const long volume = 1000000 + static_cast<long>((i * 7919) % 250000);
        out << frame.timestamps[i] << ',' << double_to_string(open) << ','
            << double_to_string(high) << ',' << double_to_string(low) << ','
            << double_to_string(close) << ',' << double_to_string(close) << ',' << volume
            << '\n';
    }
}

}  // namespace tsf
