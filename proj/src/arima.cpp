#include "tsf/arima.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsf {
namespace {

// Solves A*x = b by Gaussian elimination with partial pivoting. A is the
// (symmetric positive semi-definite) normal-equation matrix; a vanishing
// pivot means the regression is singular.
Vec solve_linear(std::vector<Vec> a, Vec b) {
    const std::size_t n = b.size();
    double max_entry = 0.0;
    for (const Vec& row : a)
        for (double v : row) max_entry = std::max(max_entry, std::abs(v));
    const double tol = 1e-12 * std::max(1.0, max_entry);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= tol) {
            throw std::runtime_error(
                "degenerate fit: singular regression (constant or collinear series)");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

// Ordinary least squares through the normal equations; rows are the design
// matrix rows (including the leading 1 for the intercept).
Vec least_squares(const std::vector<Vec>& rows, const Vec& y) {
    const std::size_t m = rows.front().size();
    std::vector<Vec> xtx(m, Vec(m, 0.0));
    Vec xty(m, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Vec& row = rows[r];
        for (std::size_t i = 0; i < m; ++i) {
            xty[i] += row[i] * y[r];
            for (std::size_t j = i; j < m; ++j) xtx[i][j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];
    return solve_linear(std::move(xtx), std::move(xty));
}

// Innovation recursion over the differenced series with the conditional
// convention: e_t = 0 while t < p, and missing e lags count as zero.
Vec residual_recursion(const Vec& z, const Vec& phi, const Vec& theta, double intercept) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    Vec e(z.size(), 0.0);
    for (std::size_t t = p; t < z.size(); ++t) {
        double pred = intercept;
        for (std::size_t j = 0; j < p; ++j) pred += phi[j] * z[t - 1 - j];
        for (std::size_t k = 0; k < q; ++k) {
            if (t >= k + 1) pred += theta[k] * e[t - 1 - k];
        }
        e[t] = z[t] - pred;
    }
    return e;
}

// Largest AR characteristic-root modulus check via the companion matrix:
// the process is stationary iff the companion spectral radius is < 1.
// Power-iteration growth rate is accurate enough for a warning flag.
bool ar_nonstationary(const Vec& phi) {
    const std::size_t p = phi.size();
    if (p == 0) return false;
    if (p == 1) return std::abs(phi[0]) >= 1.0;

    Vec v(p, 1.0 / std::sqrt(static_cast<double>(p)));
    double log_growth = 0.0;
    const int warmup = 100, measured = 200;
    for (int it = 0; it < warmup + measured; ++it) {
        Vec next(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) next[0] += phi[j] * v[j];
        for (std::size_t j = 1; j < p; ++j) next[j] = v[j - 1];
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return false;
        for (double& x : next) x /= norm;
        if (it >= warmup) log_growth += std::log(norm);
        v = std::move(next);
    }
    return log_growth / measured >= 0.0;  // spectral radius >= 1
}

}  // namespace

void ArimaOrder::validate() const {
    if (p + q == 0 && d == 0) {
        throw std::invalid_argument("ArimaOrder: (0,0,0) is degenerate; need p+q >= 1 or d >= 1");
    }
}

Vec difference(const Vec& series, std::size_t d) {
    if (series.size() <= d) {
        throw std::invalid_argument("difference: series of length " +
                                    std::to_string(series.size()) +
                                    " is too short to difference " + std::to_string(d) +
                                    " times");
    }
    Vec cur = series;
    for (std::size_t level = 0; level < d; ++level) {
        Vec next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) next[i] = cur[i + 1] - cur[i];
        cur = std::move(next);
    }
    return cur;
}

Vec difference_anchors(const Vec& series, std::size_t d) {
    if (series.size() <= d) {
        throw std::invalid_argument("difference_anchors: series too short");
    }
    Vec anchors;
    anchors.reserve(d);
    Vec cur = series;
    for (std::size_t level = 0; level < d; ++level) {
        anchors.push_back(cur.front());
        Vec next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) next[i] = cur[i + 1] - cur[i];
        cur = std::move(next);
    }
    return anchors;
}

Vec undifference(const Vec& diffs, const Vec& anchors, std::size_t d) {
    if (anchors.size() != d) {
        throw std::invalid_argument("undifference: got " + std::to_string(anchors.size()) +
                                    " anchors for d=" + std::to_string(d));
    }
    Vec cur = diffs;
    for (std::size_t level = d; level-- > 0;) {
        Vec full(cur.size() + 1);
        full[0] = anchors[level];
        for (std::size_t i = 0; i < cur.size(); ++i) full[i + 1] = full[i] + cur[i];
        cur = std::move(full);
    }
    // cur is now the full reconstruction; drop the d re-attached seeds so the
    // output lines up with the differenced input (the continuation).
    if (d > 0) cur.erase(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(d));
    return cur;
}

ArimaModel fit_arima(const Vec& series, const ArimaOrder& order) {
    order.validate();
    if (series.size() <= order.d) {
        throw std::invalid_argument("fit_arima: series too short to difference");
    }
    const Vec z = difference(series, order.d);
    const std::size_t floor_len = 10 * (order.p + order.q + 1);
    if (z.size() < floor_len) {
        throw std::invalid_argument("fit_arima: need at least " + std::to_string(floor_len) +
                                    " observations after differencing, have " +
                                    std::to_string(z.size()));
    }

    ArimaModel m;
    m.order = order;
    const std::size_t p = order.p;
    const std::size_t q = order.q;

    if (p + q > 0) {
        Vec e_hat;  // stage-1 innovation estimates, aligned with z
        std::size_t e_start = 0;
        if (q > 0) {
            // Stage 1: long AR to proxy the innovations.
            const std::size_t long_ar =
                std::min<std::size_t>(std::max<std::size_t>(p + q + 3, 10), (z.size() - 1) / 3);
            std::vector<Vec> rows;
            Vec ys;
            for (std::size_t t = long_ar; t < z.size(); ++t) {
                Vec row(1 + long_ar);
                row[0] = 1.0;
                for (std::size_t j = 0; j < long_ar; ++j) row[1 + j] = z[t - 1 - j];
                rows.push_back(std::move(row));
                ys.push_back(z[t]);
            }
            const Vec beta = least_squares(rows, ys);
            e_hat.assign(z.size(), 0.0);
            e_start = long_ar;
            for (std::size_t t = long_ar; t < z.size(); ++t) {
                double pred = beta[0];
                for (std::size_t j = 0; j < long_ar; ++j) pred += beta[1 + j] * z[t - 1 - j];
                e_hat[t] = z[t] - pred;
            }
        }

        // Stage 2: regress z_t on its own lags and the estimated innovations.
        const std::size_t t0 = std::max(p, q > 0 ? e_start + q : std::size_t{0});
        std::vector<Vec> rows;
        Vec ys;
        for (std::size_t t = t0; t < z.size(); ++t) {
            Vec row(1 + p + q);
            row[0] = 1.0;
            for (std::size_t j = 0; j < p; ++j) row[1 + j] = z[t - 1 - j];
            for (std::size_t k = 0; k < q; ++k) row[1 + p + k] = e_hat[t - 1 - k];
            rows.push_back(std::move(row));
            ys.push_back(z[t]);
        }
        if (rows.size() < 1 + p + q) {
            throw std::invalid_argument("fit_arima: not enough rows for the lag regression");
        }
        const Vec beta = least_squares(rows, ys);
        m.intercept = beta[0];
        m.phi.assign(beta.begin() + 1, beta.begin() + 1 + static_cast<std::ptrdiff_t>(p));
        m.theta.assign(beta.begin() + 1 + static_cast<std::ptrdiff_t>(p), beta.end());
    }
    // p + q == 0: pure integrated model, no estimation; intercept stays 0 so
    // the one-step forecast is the martingale value (last observation).

    const Vec e = residual_recursion(z, m.phi, m.theta, m.intercept);
    m.z_tail.assign(z.end() - static_cast<std::ptrdiff_t>(std::min(p, z.size())), z.end());
    m.e_tail.assign(e.end() - static_cast<std::ptrdiff_t>(std::min(q, e.size())), e.end());

    m.levels.resize(order.d);
    Vec cur = series;
    for (std::size_t level = 0; level < order.d; ++level) {
        m.levels[level] = cur.back();
        cur = difference(cur, 1);
    }

    m.stationarity_warning = ar_nonstationary(m.phi);
    return m;
}

double forecast_one_differenced(const ArimaModel& m) {
    const std::size_t p = m.order.p;
    const std::size_t q = m.order.q;
    if (m.z_tail.size() < p || m.e_tail.size() < q) {
        throw std::invalid_argument("forecast_one: model history shorter than its order");
    }
    double pred = m.intercept;
    for (std::size_t j = 0; j < p; ++j) pred += m.phi[j] * m.z_tail[m.z_tail.size() - 1 - j];
    for (std::size_t k = 0; k < q; ++k) pred += m.theta[k] * m.e_tail[m.e_tail.size() - 1 - k];
    return pred;
}

double forecast_one(const ArimaModel& m) {
    double y = forecast_one_differenced(m);
    for (double level : m.levels) y += level;
    return y;
}

void update_with_observation(ArimaModel& m, double y) {
    const double z_hat = forecast_one_differenced(m);

    // Walk the new observation down the differencing levels.
    double prev_level_new = y;
    for (std::size_t level = 0; level < m.order.d; ++level) {
        const double next = prev_level_new - m.levels[level];
        m.levels[level] = prev_level_new;
        prev_level_new = next;
    }
    const double z_new = prev_level_new;

    if (m.order.p > 0) {
        m.z_tail.push_back(z_new);
        m.z_tail.erase(m.z_tail.begin());
    }
    if (m.order.q > 0) {
        m.e_tail.push_back(z_new - z_hat);
        m.e_tail.erase(m.e_tail.begin());
    }
}

Vec rolling_forecast(const Vec& train, const Vec& test, const ArimaOrder& order) {
    if (test.empty()) {
        throw std::invalid_argument("rolling_forecast: empty test segment");
    }
    Vec history = train;
    Vec preds;
    preds.reserve(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) {
        ArimaModel m;
        try {
            m = fit_arima(history, order);
        } catch (const std::exception& e) {
            throw std::runtime_error("rolling_forecast: fit failed at test index " +
                                     std::to_string(k) + ": " + e.what());
        }
        preds.push_back(forecast_one(m));
        history.push_back(test[k]);
    }
    return preds;
}

}  // namespace tsf
