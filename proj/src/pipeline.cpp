#include "tsf/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tsf {
namespace {

// Splits one RFC-4180 record into fields. `line` must already contain the
// full record (quoted fields in Yahoo exports never span lines).
std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

bool is_missing_cell(const std::string& s) {
    if (s.empty()) return true;
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "null" || lower == "nan" || lower == "na";
}

bool parse_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

SeriesFrame load_series(const std::string& path, const std::string& column_name,
                        std::size_t min_rows) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_series: cannot open '" + path + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("load_series: '" + path + "' is empty");
    }
    const std::vector<std::string> header = split_csv_record(line);

    std::size_t date_col = header.size();
    std::size_t value_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "Date") date_col = i;
        if (header[i] == column_name) value_col = i;
    }
    if (date_col == header.size()) {
        throw std::runtime_error("load_series: '" + path + "' has no 'Date' column");
    }
    if (value_col == header.size()) {
        throw std::runtime_error("load_series: '" + path + "' has no '" + column_name +
                                 "' column");
    }

    SeriesFrame frame;
    frame.name = path;
    if (auto slash = path.find_last_of('/'); slash != std::string::npos) {
        frame.name = path.substr(slash + 1);
    }
    if (auto dotpos = frame.name.rfind(".csv"); dotpos != std::string::npos) {
        frame.name = frame.name.substr(0, dotpos);
    }

    std::vector<std::pair<std::string, double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_record(line);
        if (fields.size() <= std::max(date_col, value_col)) {
            throw std::runtime_error("load_series: '" + path + "' line " +
                                     std::to_string(line_no) + " has too few fields");
        }
        const std::string& date = fields[date_col];
        const std::string& cell = fields[value_col];
        if (!parse_iso_date(date)) {
            throw std::runtime_error("load_series: '" + path + "' line " +
                                     std::to_string(line_no) + ": unparseable date '" + date +
                                     "'");
        }
        if (is_missing_cell(cell)) {
            ++frame.dropped_rows;
            continue;
        }
        double value = 0.0;
        try {
            std::size_t consumed = 0;
            value = std::stod(cell, &consumed);
            if (consumed != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw std::runtime_error("load_series: '" + path + "' line " +
                                     std::to_string(line_no) + ": unparseable value '" + cell +
                                     "' in column '" + column_name + "'");
        }
        if (!std::isfinite(value)) {
            ++frame.dropped_rows;
            continue;
        }
        rows.emplace_back(date, value);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw std::runtime_error("load_series: '" + path + "': duplicate date '" +
                                     rows[i].first + "'");
        }
    }

    if (rows.size() < min_rows) {
        throw std::runtime_error("load_series: '" + path + "' has only " +
                                 std::to_string(rows.size()) + " usable rows; need at least " +
                                 std::to_string(min_rows));
    }

    frame.timestamps.reserve(rows.size());
    frame.values.reserve(rows.size());
    for (auto& [date, value] : rows) {
        frame.timestamps.push_back(std::move(date));
        frame.values.push_back(value);
    }
    return frame;
}

SplitSpec split_spec(std::size_t n, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("split: fraction must be in (0,1), got " +
                                    std::to_string(fraction));
    }
    SplitSpec spec;
    spec.train_fraction = fraction;
    spec.train_len = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * fraction));
    spec.test_len = n - spec.train_len;
    return spec;
}

std::pair<SeriesFrame, SeriesFrame> split(const SeriesFrame& series, double fraction) {
    const SplitSpec spec = split_spec(series.size(), fraction);
    if (spec.train_len == 0 || spec.test_len == 0) {
        throw std::runtime_error("split: " + std::to_string(series.size()) + " points at fraction " +
                                 std::to_string(fraction) + " leaves an empty segment");
    }
    SeriesFrame train, test;
    train.name = series.name;
    test.name = series.name;
    const auto cut = static_cast<std::ptrdiff_t>(spec.train_len);
    train.timestamps.assign(series.timestamps.begin(), series.timestamps.begin() + cut);
    train.values.assign(series.values.begin(), series.values.begin() + cut);
    test.timestamps.assign(series.timestamps.begin() + cut, series.timestamps.end());
    test.values.assign(series.values.begin() + cut, series.values.end());
    return {std::move(train), std::move(test)};
}

ScaledSplit scale_fit_transform(const Vec& train, const Vec& test) {
    if (train.empty()) {
        throw std::invalid_argument("scale_fit_transform: empty training segment");
    }
    const auto [mn, mx] = std::minmax_element(train.begin(), train.end());
    if (!(*mx > *mn)) {
        throw std::runtime_error("scale_fit_transform: training segment is constant (" +
                                 std::to_string(*mn) + "); cannot scale");
    }
    ScaledSplit out;
    out.stats = ScalerStats{*mn, *mx};
    out.train.reserve(train.size());
    out.test.reserve(test.size());
    for (double v : train) out.train.push_back(out.stats.scale(v));
    for (double v : test) out.test.push_back(out.stats.scale(v));
    return out;
}

SupervisedSet to_supervised(const Vec& values, std::size_t lookback) {
    if (lookback == 0) {
        throw std::invalid_argument("to_supervised: lookback must be at least 1");
    }
    if (values.size() <= lookback) {
        throw std::invalid_argument("to_supervised: series of length " +
                                    std::to_string(values.size()) +
                                    " is too short for lookback " + std::to_string(lookback));
    }
    SupervisedSet set;
    set.lookback = lookback;
    const std::size_t n = values.size() - lookback;
    set.x.reserve(n);
    set.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        set.x.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i),
                           values.begin() + static_cast<std::ptrdiff_t>(i + lookback));
        set.y.push_back(values[i + lookback]);
    }
    return set;
}

}  // namespace tsf
