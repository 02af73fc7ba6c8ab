"""Time-series forecasting engine: ARIMA, LSTM and BiLSTM from scratch.

Thin python layer over the C++ core; see the _core module for the full
surface.
"""

from ._core import (  # noqa: F401
    ArimaModel,
    ArimaOrder,
    FitResult,
    ForecastRun,
    LossRecord,
    LossStats,
    LossTrace,
    Network,
    ScalerStats,
    SeriesFrame,
    SupervisedSet,
    SynthKind,
    TrainConfig,
    difference,
    fit,
    fit_arima,
    forecast_one,
    load_series,
    loss_stats,
    make_synth_series,
    mse_loss,
    pct_change,
    rmse,
    rolling_forecast,
    scale_fit_transform,
    sigmoid,
    split,
    tanh_act,
    to_supervised,
    undifference,
    walk_forward,
    write_series_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
