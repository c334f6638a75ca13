#include "volcast/backtest.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "volcast/error.hpp"

namespace volcast {

std::string to_string(RealizedProxy p) { return p == RealizedProxy::AbsReturn ? "abs" : "squared"; }

ReturnSeries realized_proxy(const ReturnSeries& returns, RealizedProxy proxy) {
    if (returns.empty()) {
        throw InsufficientDataError("realized proxy of an empty series");
    }
    ReturnSeries out = returns;
    for (auto& v : out.values) v = proxy == RealizedProxy::AbsReturn ? std::abs(v) : v * v;
    return out;
}

BacktestReport error_metrics(std::span<const Date> forecast_dates, std::span<const double> forecast,
                             std::span<const Date> realized_dates, std::span<const double> realized,
                             RealizedProxy proxy) {
    if (forecast_dates.size() != forecast.size() || realized_dates.size() != realized.size()) {
        throw std::invalid_argument("dates and values differ in length");
    }
    std::map<Date, double> actual;
    for (std::size_t i = 0; i < realized.size(); ++i) {
        if (!actual.emplace(realized_dates[i], realized[i]).second) {
            throw AlignmentError("duplicate realized date " + realized_dates[i].to_string());
        }
    }
    // Pairs ordered by date so the sums do not depend on input order.
    std::map<Date, std::pair<double, double>> matched;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        auto it = actual.find(forecast_dates[i]);
        if (it == actual.end()) continue;
        if (!matched.emplace(forecast_dates[i], std::make_pair(forecast[i], it->second)).second) {
            throw AlignmentError("duplicate forecast date " + forecast_dates[i].to_string());
        }
    }
    if (matched.empty()) {
        throw AlignmentError("forecast and realized series share no dates");
    }

    BacktestReport r;
    r.proxy = proxy;
    r.n = matched.size();
    r.dropped = (forecast.size() - matched.size()) + (realized.size() - matched.size());
    r.period_start = matched.begin()->first;
    r.period_end = matched.rbegin()->first;
    double abs_sum = 0.0, sq_sum = 0.0;
    for (const auto& [date, fx] : matched) {
        const double e = fx.first - fx.second;
        abs_sum += std::abs(e);
        sq_sum += e * e;
    }
    const double n = static_cast<double>(r.n);
    r.mae = abs_sum / n;
    // Equal errors can round the root below the mean by an ulp.
    r.rmse = std::max(std::sqrt(sq_sum / n), r.mae);
    return r;
}

BacktestReport error_metrics(const ForecastResult& forecast, const ReturnSeries& realized, RealizedProxy proxy) {
    std::vector<double> f = forecast.vol_forecast;
    if (proxy == RealizedProxy::SquaredReturn) {
        for (auto& v : f) v *= v;
    }
    return error_metrics(forecast.dates, f, realized.dates, realized.values, proxy);
}

nlohmann::ordered_json to_json(const BacktestReport& r) {
    return {{"mae", r.mae},
            {"rmse", r.rmse},
            {"n", r.n},
            {"dropped", r.dropped},
            {"proxy", to_string(r.proxy)},
            {"period_start", r.period_start.to_string()},
            {"period_end", r.period_end.to_string()}};
}

std::string backtest_csv_header() { return "symbol,model,mae,rmse,n"; }

std::string backtest_csv_row(const BacktestReport& r, const std::string& symbol, const std::string& model) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%zu", r.mae, r.rmse, r.n);
    return symbol + "," + model + "," + buf;
}

}  // namespace volcast
