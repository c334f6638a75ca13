#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "volcast/timeseries.hpp"

namespace volcast {

/// Sample moments. `kurtosis` is excess kurtosis (0 for a normal sample).
struct DescriptiveStats {
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    std::size_t n = 0;
};

/// Mean, sample sd (n-1), skewness and excess kurtosis from standardized central
/// moments. Requires n >= 4 and non-zero dispersion.
DescriptiveStats moments(std::span<const double> values);

/// Sample standard deviation with an n-1 denominator. Zero for a constant series.
double sample_sd(std::span<const double> values);

inline constexpr double kTradingDaysPerMonth = 21.0;
inline constexpr double kTradingDaysPerYear = 252.0;

/// Daily, monthly and annual volatility (percent) plus the Hurst exponent of the
/// price levels.
struct VolatilitySummary {
    double daily_vol = 0.0;
    double monthly_vol = 0.0;
    double annual_vol = 0.0;
    double hurst = 0.0;
};

/// Scaling dispersion regression: for lags 2..max_lag take the root mean square of
/// x[t+lag] - x[t], and return the least-squares slope of its log against log lag,
/// clamped to [0, 1]. Needs at least 2 * max_lag points.
double hurst_exponent(std::span<const double> values, std::size_t max_lag = 100);

/// Builds the summary from an already-known daily volatility.
VolatilitySummary scale_daily_volatility(double daily_vol, double hurst);

VolatilitySummary volatility_summary(const ReturnSeries& returns,
                                     std::span<const double> levels_for_hurst,
                                     std::size_t hurst_max_lag = 100);

enum class CorrelogramKind { ACF, PACF };

struct Correlogram {
    CorrelogramKind kind = CorrelogramKind::ACF;
    std::vector<std::size_t> lags;  // 1..max_lag
    std::vector<double> values;
    double lag0 = 1.0;
    double conf_band = 0.0;  // 1.96 / sqrt(n)
    std::size_t last_significant_lag = 0;
    std::size_t n = 0;
};

/// Sample ACF, or PACF via the Durbin-Levinson recursion. Requires n > max_lag + 1.
Correlogram correlogram(std::span<const double> values, std::size_t max_lag, CorrelogramKind kind);

struct QQPoint {
    double theoretical = 0.0;
    double sample = 0.0;
};

/// Normal Q-Q pairs. Theoretical quantiles use plotting positions (i - 0.5) / n,
/// scaled by the sample mean and sd.
std::vector<QQPoint> qq_points(std::span<const double> values);

/// `lag,value,band`
void write_correlogram_csv(std::ostream& out, const Correlogram& c);
/// `theoretical,sample`
void write_qq_csv(std::ostream& out, const std::vector<QQPoint>& points);

}  // namespace volcast
