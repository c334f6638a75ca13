"""Conditional-volatility toolkit: GARCH, GJR-GARCH and EGARCH estimation, forecasting and backtesting."""

from ._volcast import (
    EstimationError,
    VolcastError,
    correlogram,
    error_metrics,
    fit,
    forecast,
    hurst_exponent,
    load_returns,
    log_likelihood,
    long_run_variance,
    moments,
    rolling_forecast,
    select_arma,
    simulate,
    volatility_summary,
)

__all__ = [
    "EstimationError",
    "VolcastError",
    "correlogram",
    "error_metrics",
    "fit",
    "forecast",
    "hurst_exponent",
    "load_returns",
    "log_likelihood",
    "long_run_variance",
    "moments",
    "rolling_forecast",
    "select_arma",
    "simulate",
    "volatility_summary",
]
