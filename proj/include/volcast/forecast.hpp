#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volcast/garch.hpp"
#include "volcast/timeseries.hpp"

namespace volcast {

enum class WindowMethod { Fixed, Expanding, Analytic };

std::string to_string(WindowMethod m);

/// Bookkeeping for one forecast round.
struct ForecastRound {
    std::size_t origin = 0;  // index of the first forecast target
    Date origin_date;
    std::size_t train_begin = 0;  // observations [train_begin, train_end) informed the round
    std::size_t train_end = 0;
    std::size_t forecasts = 0;
    GarchParams params;
    bool skipped = false;
    std::string note;
};

struct ForecastResult {
    std::vector<Date> dates;
    std::vector<double> vol_forecast;  // daily sigma, percent
    WindowMethod method = WindowMethod::Analytic;
    std::size_t window = 0;
    std::size_t refit_every = 0;
    ModelSpec spec;
    std::vector<ForecastRound> rounds;
    std::vector<std::string> warnings;
};

struct AnalyticOptions {
    /// Monte-Carlo paths for EGARCH multi-step forecasts.
    std::size_t mc_paths = 10000;
    std::uint64_t seed = 0;
};

/// Conditional variance for the step after `data`: filter the mean residuals of
/// `data` from `initial_variance` and apply one more recursion step.
double next_variance(const ModelSpec& spec, const GarchParams& params, std::span<const double> data);

/// Expected variance for steps 1..horizon given the one-step-ahead variance.
/// GARCH and GJR use the closed-form recursion v_{k+1} = omega + persistence * v_k
/// (GJR persistence alpha + gamma P(Z<0) + beta); EGARCH averages simulated paths.
std::vector<double> variance_forecast(const ModelSpec& spec, const GarchParams& params, double next_var,
                                      std::size_t horizon, const AnalyticOptions& options = {});

/// Multi-step variance forecasts from the end of a fitted sample.
std::vector<double> analytic_forecast(const FitResult& fit, std::size_t horizon,
                                      const AnalyticOptions& options = {});

/// Called with [begin, end) for every block of the input series handed to an
/// estimator or filter.
using AccessObserver = std::function<void(std::size_t begin, std::size_t end)>;

struct RollingOptions {
    /// Trailing observations used to set the recursion state (Fixed only).
    std::size_t window = 5;
    /// Forecast days per round; Expanding refits once per round.
    std::size_t refit_every = 5;
    /// Minimum history before the first fit.
    std::size_t min_train = 250;
    /// Skip estimation and use these parameters in every round.
    std::optional<GarchParams> params;
    FitOptions fit{};
    AnalyticOptions analytic{};
    AccessObserver on_access;
};

/// Out-of-sample daily volatility forecasts for `steps` observations starting at
/// the first date on or after `start`.
///
/// Expanding: each round refits on all observations before the round origin.
/// Fixed: parameters are estimated once on the pre-start history; each round
/// re-filters only the trailing `window` observations before the origin.
ForecastResult rolling_forecast(const ReturnSeries& series, const ModelSpec& spec, WindowMethod method,
                                Date start, std::size_t steps, const RollingOptions& options = {});

/// `date,vol_forecast`
void write_forecast_csv(std::ostream& out, const ForecastResult& forecast);

}  // namespace volcast
