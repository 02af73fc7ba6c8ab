#ifndef TSF_ARIMA_HPP
#define TSF_ARIMA_HPP

#include <cstddef>

#include "tsf/numkit.hpp"

namespace tsf {

struct ArimaOrder {
    std::size_t p = 5;
    std::size_t d = 1;
    std::size_t q = 0;

    /// Throws unless p+q >= 1 or d >= 1.
    void validate() const;
};

/// Fitted ARIMA(p,d,q) state: coefficients plus just enough history to
/// produce and chain one-step forecasts.
struct ArimaModel {
    ArimaOrder order;
    Vec phi;                  // AR coefficients, lag 1 first
    Vec theta;                // MA coefficients, lag 1 first
    double intercept = 0.0;
    Vec z_tail;               // last p differenced values, oldest first
    Vec e_tail;               // last q innovations, oldest first
    Vec levels;               // last value of each differencing level: y_T, dy_T, ..., size d
    bool stationarity_warning = false;  // some AR characteristic root is inside the unit circle
};

/// First-differences the series d times; output length = input length - d.
Vec difference(const Vec& series, std::size_t d);

/// The d values differencing consumes: the first element at every level,
/// [s[0], (ds)[0], ..., (d^{d-1}s)[0]].
Vec difference_anchors(const Vec& series, std::size_t d);

/// Inverse of difference given the anchors. Returns the continuation, i.e.
/// the reconstruction of series[d:], same length as diffs.
Vec undifference(const Vec& diffs, const Vec& anchors, std::size_t d);

/// Two-stage Hannan-Rissanen estimation by least squares. With q = 0 this
/// is a single lag regression; with q > 0 a long AR estimates the
/// innovations first. The pure-integrated case p = q = 0 skips estimation
/// entirely (intercept 0), so ARIMA(0,1,0) forecasts are exactly the last
/// observation. Throws on a series shorter than 10*(p+q+1) after
/// differencing or on a singular (constant/collinear) regression.
ArimaModel fit_arima(const Vec& series, const ArimaOrder& order);

/// One-step-ahead conditional mean on the differenced scale:
/// z_hat = intercept + sum phi_j z_{T+1-j} + sum theta_k e_{T+1-k}.
double forecast_one_differenced(const ArimaModel& m);

/// forecast_one_differenced mapped back to original units through the
/// stored level tails.
double forecast_one(const ArimaModel& m);

/// Appends an observed value without re-estimating coefficients: updates
/// the differenced tail, the innovation tail (e = z - z_hat) and the level
/// anchors. This is the fixed-coefficient walk used when per-step refits
/// are disabled.
void update_with_observation(ArimaModel& m, double y);

/// Expanding-window rolling one-step forecasts: for every test index, fit
/// on all observations seen so far, forecast one step, then append the
/// true value to the history. A fit failure aborts with the test index in
/// the error.
Vec rolling_forecast(const Vec& train, const Vec& test, const ArimaOrder& order);

}  // namespace tsf

#endif  // TSF_ARIMA_HPP
