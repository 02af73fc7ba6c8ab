#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsf/arima.hpp"
#include "tsf/cells.hpp"
#include "tsf/harness.hpp"
#include "tsf/numkit.hpp"
#include "tsf/pipeline.hpp"
#include "tsf/synth.hpp"
#include "tsf/trainer.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-series forecasting core: ARIMA, LSTM and BiLSTM built from scratch";

    // --- numkit -----------------------------------------------------------
    m.def("sigmoid", &tsf::sigmoid, py::arg("x"));
    m.def("tanh_act", &tsf::tanh_act, py::arg("x"));

    // --- pipeline ----------------------------------------------------------
    py::class_<tsf::SeriesFrame>(m, "SeriesFrame")
        .def(py::init<>())
        .def_readwrite("name", &tsf::SeriesFrame::name)
        .def_readwrite("timestamps", &tsf::SeriesFrame::timestamps)
        .def_readwrite("values", &tsf::SeriesFrame::values)
        .def_readonly("dropped_rows", &tsf::SeriesFrame::dropped_rows)
        .def("__len__", &tsf::SeriesFrame::size);

    py::class_<tsf::ScalerStats>(m, "ScalerStats")
        .def_readonly("min", &tsf::ScalerStats::min)
        .def_readonly("max", &tsf::ScalerStats::max)
        .def("scale", &tsf::ScalerStats::scale)
        .def("inverse", &tsf::ScalerStats::inverse);

    py::class_<tsf::SupervisedSet>(m, "SupervisedSet")
        .def_readonly("x", &tsf::SupervisedSet::x)
        .def_readonly("y", &tsf::SupervisedSet::y)
        .def_readonly("lookback", &tsf::SupervisedSet::lookback)
        .def("__len__", &tsf::SupervisedSet::size);

    m.def("load_series", &tsf::load_series, py::arg("path"), py::arg("column_name"),
          py::arg("min_rows") = 30);
    m.def("split", &tsf::split, py::arg("series"), py::arg("fraction") = 0.70);
    m.def(
        "scale_fit_transform",
        [](const tsf::Vec& train, const tsf::Vec& test) {
            tsf::ScaledSplit s = tsf::scale_fit_transform(train, test);
            return py::make_tuple(s.train, s.test, s.stats);
        },
        py::arg("train"), py::arg("test"));
    m.def("to_supervised", &tsf::to_supervised, py::arg("values"), py::arg("lookback"));

    // --- trainer -----------------------------------------------------------
    py::class_<tsf::TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &tsf::TrainConfig::epochs)
        .def_readwrite("neurons", &tsf::TrainConfig::neurons)
        .def_readwrite("batch_size", &tsf::TrainConfig::batch_size)
        .def_readwrite("lookback", &tsf::TrainConfig::lookback)
        .def_readwrite("clip_norm", &tsf::TrainConfig::clip_norm)
        .def_readwrite("seed", &tsf::TrainConfig::seed);

    py::class_<tsf::LossRecord>(m, "LossRecord")
        .def_readonly("epoch", &tsf::LossRecord::epoch)
        .def_readonly("batch_step", &tsf::LossRecord::batch_step)
        .def_readonly("loss", &tsf::LossRecord::loss);

    py::class_<tsf::LossTrace>(m, "LossTrace")
        .def_readonly("records", &tsf::LossTrace::records);

    py::class_<tsf::Network>(m, "Network")
        .def_readonly("hidden", &tsf::Network::hidden)
        .def("predict",
             [](const tsf::Network& net, const tsf::Vec& window) {
                 return tsf::predict_window(net, window);
             },
             py::arg("window"));

    py::class_<tsf::FitResult>(m, "FitResult")
        .def_readonly("net", &tsf::FitResult::net)
        .def_readonly("trace", &tsf::FitResult::trace);

    m.def(
        "fit",
        [](const std::string& option, const tsf::SupervisedSet& train,
           const tsf::TrainConfig& cfg) {
            if (option != "lstm" && option != "bilstm") {
                throw std::invalid_argument("fit: option must be 'lstm' or 'bilstm'");
            }
            return tsf::fit(option == "lstm" ? tsf::ModelOption::Lstm : tsf::ModelOption::BiLstm,
                            train, cfg);
        },
        py::arg("option"), py::arg("train"), py::arg("config") = tsf::TrainConfig{});
    m.def("mse_loss", [](const tsf::Vec& pred, const tsf::Vec& target) {
        return tsf::mse_loss(pred, target);
    });

    // --- arima ---------------------------------------------------------------
    py::class_<tsf::ArimaOrder>(m, "ArimaOrder")
        .def(py::init([](std::size_t p, std::size_t d, std::size_t q) {
                 return tsf::ArimaOrder{p, d, q};
             }),
             py::arg("p") = 5, py::arg("d") = 1, py::arg("q") = 0)
        .def_readwrite("p", &tsf::ArimaOrder::p)
        .def_readwrite("d", &tsf::ArimaOrder::d)
        .def_readwrite("q", &tsf::ArimaOrder::q);

    py::class_<tsf::ArimaModel>(m, "ArimaModel")
        .def_readonly("phi", &tsf::ArimaModel::phi)
        .def_readonly("theta", &tsf::ArimaModel::theta)
        .def_readonly("intercept", &tsf::ArimaModel::intercept)
        .def_readonly("stationarity_warning", &tsf::ArimaModel::stationarity_warning);

    m.def("difference", &tsf::difference, py::arg("series"), py::arg("d"));
    m.def("undifference", &tsf::undifference, py::arg("diffs"), py::arg("anchors"), py::arg("d"));
    m.def("fit_arima", &tsf::fit_arima, py::arg("series"), py::arg("order"));
    m.def("forecast_one", &tsf::forecast_one, py::arg("model"));
    m.def("rolling_forecast", &tsf::rolling_forecast, py::arg("train"), py::arg("test"),
          py::arg("order"));

    // --- harness ---------------------------------------------------------------
    py::class_<tsf::ForecastRun>(m, "ForecastRun")
        .def_readonly("predictions", &tsf::ForecastRun::predictions)
        .def_readonly("actuals", &tsf::ForecastRun::actuals)
        .def_readonly("rmse", &tsf::ForecastRun::rmse);

    py::class_<tsf::LossStats>(m, "LossStats")
        .def_readonly("min", &tsf::LossStats::min)
        .def_readonly("max", &tsf::LossStats::max)
        .def_readonly("sd", &tsf::LossStats::sd)
        .def_readonly("n_batches", &tsf::LossStats::n_batches);

    m.def("rmse", [](const tsf::Vec& actual, const tsf::Vec& predicted) {
        return tsf::rmse(actual, predicted);
    });
    m.def("pct_change", &tsf::pct_change, py::arg("new_value"), py::arg("original_value"));
    m.def("loss_stats", &tsf::loss_stats, py::arg("trace"), py::arg("epoch"));
    m.def(
        "walk_forward",
        [](const tsf::Network& net, const std::string& kind, const tsf::ScalerStats& scaler,
           std::size_t lookback, const tsf::SeriesFrame& test, const tsf::Vec& history) {
            const tsf::ModelKind mk =
                kind == "lstm" ? tsf::ModelKind::Lstm : tsf::ModelKind::BiLstm;
            return tsf::walk_forward(net, mk, scaler, lookback, test, history);
        },
        py::arg("net"), py::arg("kind"), py::arg("scaler"), py::arg("lookback"), py::arg("test"),
        py::arg("history_tail_scaled"));

    // --- synthetic data ----------------------------------------------------
    py::enum_<tsf::SynthKind>(m, "SynthKind")
        .value("Price", tsf::SynthKind::Price)
        .value("TanhMeanRev", tsf::SynthKind::TanhMeanRev)
        .value("SineMap", tsf::SynthKind::SineMap)
        .value("RegimeDrift", tsf::SynthKind::RegimeDrift)
        .value("BumpMap", tsf::SynthKind::BumpMap)
        .value("SineMeanRev", tsf::SynthKind::SineMeanRev);
    m.def("make_synth_series", &tsf::make_synth_series, py::arg("kind"), py::arg("seed"),
          py::arg("n"));
    m.def("write_series_csv", &tsf::write_series_csv, py::arg("frame"), py::arg("path"));
}
