#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "tsf/harness.hpp"
#include "tsf/trainer.hpp"

using namespace tsf;

namespace {

// The published benchmark rows this harness is checked against: per series
// {arima, lstm, bilstm} RMSE.
struct RefRow {
    const char* series;
    double arima, lstm, bilstm;
};
const RefRow kReferenceRmse[] = {
    {"n225.monthly", 766.45, 102.49, 23.13}, {"ixic.daily", 34.61, 2.01, 1.75},
    {"ixic.weekly", 72.53, 7.95, 11.53},     {"ixic.monthly", 135.60, 27.05, 8.49},
    {"hsi.monthly", 1306.95, 172.58, 121.71}, {"gspc.daily", 14.83, 1.74, 0.62},
    {"gspc.monthly", 55.30, 5.74, 4.63},     {"dji.daily", 139.85, 14.11, 3.16},
    {"dji.weekly", 287.60, 26.61, 23.05},    {"dji.monthly", 516.97, 69.53, 23.69},
    {"ibm.daily", 1.70, 0.22, 0.15},
};

SeriesFrame frame_of(const Vec& values) {
    SeriesFrame f;
    f.name = "fixture";
    for (std::size_t i = 0; i < values.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2021-%02zu-%02zu", 1 + i / 28, 1 + i % 28);
        f.timestamps.push_back(buf);
    }
    f.values = values;
    return f;
}

}  // namespace

TEST_CASE("rmse examples and symmetry") {
    CHECK(rmse(Vec{1.0, 2.0}, Vec{1.0, 2.0}) == 0.0);
    CHECK(rmse(Vec{0.0, 0.0}, Vec{3.0, 4.0}) == doctest::Approx(3.5355339).epsilon(1e-7));
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        Vec a(9), b(9);
        for (double& v : a) v = rng.uniform(-5.0, 5.0);
        for (double& v : b) v = rng.uniform(-5.0, 5.0);
        CHECK(rmse(a, b) == doctest::Approx(rmse(b, a)).epsilon(1e-15));
        // definition identity against an independent accumulation order
        long double sq = 0.0L;
        for (std::size_t k = a.size(); k-- > 0;) {
            sq += static_cast<long double>(a[k] - b[k]) * (a[k] - b[k]);
        }
        const double expected = std::sqrt(static_cast<double>(sq / 9.0L));
        CHECK(rmse(a, b) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(mse_loss(b, a) == doctest::Approx(rmse(a, b) * rmse(a, b)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)rmse(Vec{}, Vec{}), std::invalid_argument);
    CHECK_THROWS_AS((void)rmse(Vec{1.0}, Vec{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("pct_change reference pairs") {
    CHECK(pct_change(23.13, 102.49) == doctest::Approx(-77.43).epsilon(0.0001));
    CHECK(pct_change(3.16, 14.11) == doctest::Approx(-77.60).epsilon(0.0001));
    CHECK(pct_change(5.0, 5.0) == 0.0);
    CHECK_THROWS_AS((void)pct_change(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("comparison rows recompute their percentages from their RMSEs") {
    Rng rng(72);
    for (int i = 0; i < 25; ++i) {
        const double a = rng.uniform(0.5, 900.0);
        const double l = rng.uniform(0.5, 100.0);
        const double b = rng.uniform(0.1, 100.0);
        const ComparisonRow row = make_comparison_row("r", a, l, b);
        CHECK(row.pct_bilstm_over_lstm ==
              doctest::Approx((b - l) / l * 100.0).epsilon(1e-9));
        CHECK(row.pct_bilstm_over_arima ==
              doctest::Approx((b - a) / a * 100.0).epsilon(1e-9));
        CHECK(row.pct_lstm_over_arima ==
              doctest::Approx((l - a) / a * 100.0).epsilon(1e-9));
    }
}

TEST_CASE("loss_stats per-epoch descriptive statistics") {
    LossTrace trace;
    trace.records = {{1, 1, 1.0}, {1, 2, 2.0}, {1, 3, 3.0}, {2, 1, 0.5}};

    SUBCASE("population sd over one epoch") {
        const LossStats s = loss_stats(trace, 1);
        CHECK(s.min == 1.0);
        CHECK(s.max == 3.0);
        CHECK(s.sd == doctest::Approx(0.8165).epsilon(1e-4));
        CHECK(s.n_batches == 3);
    }
    SUBCASE("single-record epoch") {
        const LossStats s = loss_stats(trace, 2);
        CHECK(s.min == 0.5);
        CHECK(s.max == 0.5);
        CHECK(s.sd == 0.0);
        CHECK(s.n_batches == 1);
    }
    SUBCASE("epochs never mix") {
        LossTrace two;
        two.records = {{1, 1, 10.0}, {2, 1, 20.0}};
        CHECK(loss_stats(two, 1).max == 10.0);
        CHECK(loss_stats(two, 2).min == 20.0);
    }
    SUBCASE("absent epoch") {
        CHECK_THROWS_AS((void)loss_stats(trace, 3), std::invalid_argument);
    }
}

TEST_CASE("compare of a single row returns that row as the average") {
    const ComparisonRow row = make_comparison_row("only", 10.0, 5.0, 4.0);
    const ComparisonReport report = compare(std::vector<ComparisonRow>{row});
    CHECK(report.average.rmse_arima == doctest::Approx(10.0));
    CHECK(report.average.rmse_lstm == doctest::Approx(5.0));
    CHECK(report.average.rmse_bilstm == doctest::Approx(4.0));
    CHECK(report.average.pct_bilstm_over_lstm == doctest::Approx(row.pct_bilstm_over_lstm));
    CHECK_THROWS_AS((void)compare(std::vector<ComparisonRow>{}), std::invalid_argument);
}

TEST_CASE("compare reproduces the reference table averages from printed rows") {
    // Feed the rows exactly as printed (RMSEs and percentages), as an
    // external table would arrive.
    std::vector<ComparisonRow> rows;
    for (const RefRow& r : kReferenceRmse) {
        ComparisonRow row;
        row.series = r.series;
        row.rmse_arima = r.arima;
        row.rmse_lstm = r.lstm;
        row.rmse_bilstm = r.bilstm;
        row.pct_bilstm_over_lstm = pct_change(r.bilstm, r.lstm);
        row.pct_bilstm_over_arima = pct_change(r.bilstm, r.arima);
        row.pct_lstm_over_arima = pct_change(r.lstm, r.arima);
        rows.push_back(row);
    }
    const ComparisonReport report = compare(rows);
    CHECK(std::abs(report.average.rmse_arima - 302.96) < 0.1);
    CHECK(std::abs(report.average.rmse_lstm - 39.09) < 0.1);
    CHECK(std::abs(report.average.rmse_bilstm - 20.17) < 0.1);
    CHECK(std::abs(report.average.pct_lstm_over_arima - (-88.07)) < 0.1);
    CHECK(std::abs(report.average.pct_bilstm_over_arima - (-93.11)) < 0.1);
    // the bilstm-over-lstm column mean of the recomputed percentages
    CHECK(std::abs(report.average.pct_bilstm_over_lstm - (-37.78)) < 0.15);
}

TEST_CASE("average percentages are row means, not ratios of averaged RMSEs") {
    std::vector<ComparisonRow> rows = {make_comparison_row("a", 100.0, 10.0, 5.0),
                                       make_comparison_row("b", 1.0, 0.9, 0.3)};
    const ComparisonReport report = compare(rows);
    const double row_mean =
        (rows[0].pct_bilstm_over_lstm + rows[1].pct_bilstm_over_lstm) / 2.0;
    CHECK(report.average.pct_bilstm_over_lstm == doctest::Approx(row_mean).epsilon(1e-12));
    const double recomputed = pct_change(report.average.rmse_bilstm, report.average.rmse_lstm);
    CHECK(report.average.pct_bilstm_over_lstm != doctest::Approx(recomputed).epsilon(1e-3));
}

TEST_CASE("walk_forward slides on actual observations only") {
    Rng rng(73);
    Network net = init_network(CellKind::Lstm, 3, 1, rng);
    const ScalerStats identity{-1.0, 1.0};

    Vec values(12);
    for (double& v : values) v = rng.uniform(-0.8, 0.8);
    const SeriesFrame test = frame_of(values);
    const Vec history{0.1, -0.2, 0.3};

    const ForecastRun run = walk_forward(net, ModelKind::Lstm, identity, 2, test, history);
    CHECK(run.predictions.size() == test.size());
    CHECK(run.rmse == doctest::Approx(rmse(run.actuals, run.predictions)));

    SUBCASE("future perturbations cannot change earlier steps") {
        Vec perturbed = values;
        for (std::size_t i = 6; i < perturbed.size(); ++i) perturbed[i] += 50.0;
        const ForecastRun run2 =
            walk_forward(net, ModelKind::Lstm, identity, 2, frame_of(perturbed), history);
        for (std::size_t k = 0; k <= 6; ++k) {
            CHECK(run2.predictions[k] == run.predictions[k]);
        }
    }
    SUBCASE("determinism") {
        const ForecastRun run2 = walk_forward(net, ModelKind::Lstm, identity, 2, test, history);
        CHECK(run2.predictions == run.predictions);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(
            (void)walk_forward(net, ModelKind::Lstm, identity, 5, test, history),
            std::invalid_argument);
        CHECK_THROWS_AS(
            (void)walk_forward(net, ModelKind::Lstm, identity, 2, frame_of({}), history),
            std::invalid_argument);
    }
}

TEST_CASE("a model converged on a constant series walks it with near-zero error") {
    const Vec train_scaled(2501, 0.0);
    const SupervisedSet set = to_supervised(train_scaled, 1);
    TrainConfig cfg;
    cfg.batch_size = 1;
    const FitResult fr = fit(ModelOption::Lstm, set, cfg);

    const ScalerStats identity{-1.0, 1.0};
    const SeriesFrame test = frame_of(Vec(40, 0.0));
    const ForecastRun run =
        walk_forward(fr.net, ModelKind::Lstm, identity, 1, test, train_scaled);
    CHECK(run.rmse < 1e-3);
}

TEST_CASE("fixed-coefficient ARIMA walk matches rolling refits for the pure random walk") {
    Rng rng(74);
    Vec values(120);
    double x = 30.0;
    for (double& v : values) {
        x += rng.next_gaussian();
        v = x;
    }
    const Vec train(values.begin(), values.begin() + 80);
    const SeriesFrame test = frame_of(Vec(values.begin() + 80, values.end()));

    const ArimaOrder order{0, 1, 0};
    const ForecastRun refit = arima_walk(train, test, order, true);
    const ForecastRun fixed = arima_walk(train, test, order, false);
    CHECK(refit.predictions == fixed.predictions);
    CHECK(refit.predictions[0] == train.back());
    for (std::size_t k = 1; k < test.size(); ++k) {
        CHECK(fixed.predictions[k] == test.values[k - 1]);
    }
}
