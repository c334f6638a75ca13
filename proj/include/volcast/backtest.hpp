#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volcast/forecast.hpp"
#include "volcast/timeseries.hpp"

namespace volcast {

enum class RealizedProxy { AbsReturn, SquaredReturn };

std::string to_string(RealizedProxy p);

struct BacktestReport {
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t n = 0;
    /// Dates present in only one of the two inputs.
    std::size_t dropped = 0;
    RealizedProxy proxy = RealizedProxy::AbsReturn;
    Date period_start;
    Date period_end;
};

/// |r_t| (percent) or r_t^2 (percent squared), same dates.
ReturnSeries realized_proxy(const ReturnSeries& returns, RealizedProxy proxy);

/// MAE and RMSE over the dates common to both inputs.
BacktestReport error_metrics(std::span<const Date> forecast_dates, std::span<const double> forecast,
                             std::span<const Date> realized_dates, std::span<const double> realized,
                             RealizedProxy proxy = RealizedProxy::AbsReturn);

/// Scores sigma forecasts against |r|, or sigma^2 against r^2 for the squared proxy.
BacktestReport error_metrics(const ForecastResult& forecast, const ReturnSeries& realized,
                             RealizedProxy proxy = RealizedProxy::AbsReturn);

nlohmann::ordered_json to_json(const BacktestReport& report);

std::string backtest_csv_header();
/// `symbol,model,mae,rmse,n`
std::string backtest_csv_row(const BacktestReport& report, const std::string& symbol, const std::string& model);

}  // namespace volcast
