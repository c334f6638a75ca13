#include "volcast/forecast.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "volcast/error.hpp"

namespace volcast {

namespace {

void touch(const RollingOptions& options, std::size_t begin, std::size_t end) {
    if (options.on_access) options.on_access(begin, end);
}

}  // namespace

std::string to_string(WindowMethod m) {
    switch (m) {
        case WindowMethod::Fixed:
            return "fixed";
        case WindowMethod::Expanding:
            return "expanding";
        case WindowMethod::Analytic:
            return "analytic";
    }
    return "unknown";
}

double next_variance(const ModelSpec& spec, const GarchParams& params, std::span<const double> data) {
    const auto eps = mean_residuals(spec, params, data);
    const auto var = variance_filter(spec, params, eps, initial_variance(eps));
    return VarianceRecursion(spec, params).next(eps.back(), var.back());
}

std::vector<double> variance_forecast(const ModelSpec& spec, const GarchParams& params, double next_var,
                                      std::size_t horizon, const AnalyticOptions& options) {
    if (horizon < 1) {
        throw std::invalid_argument("forecast horizon must be at least 1");
    }
    validate(spec, params);
    std::vector<double> out(horizon);
    out[0] = next_var;
    switch (spec.variance) {
        case VarianceModel::Garch11:
        case VarianceModel::GjrGarch111: {
            double persistence = params.alpha + params.beta;
            if (spec.variance == VarianceModel::GjrGarch111) persistence += params.gamma * prob_negative(params.dist);
            for (std::size_t k = 1; k < horizon; ++k) out[k] = params.omega + persistence * out[k - 1];
            break;
        }
        case VarianceModel::Egarch111: {
            if (horizon == 1) break;
            if (options.mc_paths < 1) {
                throw std::invalid_argument("EGARCH forecast needs at least one simulation path");
            }
            const VarianceRecursion recursion(spec, params);
            std::vector<double> sum(horizon, 0.0);
            Rng rng(options.seed);
            for (std::size_t path = 0; path < options.mc_paths; ++path) {
                double v = next_var;
                for (std::size_t k = 1; k < horizon; ++k) {
                    const double z = draw(params.dist, rng);
                    v = recursion.next(std::sqrt(v) * z, v);
                    sum[k] += v;
                }
            }
            for (std::size_t k = 1; k < horizon; ++k) out[k] = sum[k] / static_cast<double>(options.mc_paths);
            break;
        }
    }
    for (std::size_t k = 0; k < horizon; ++k) {
        if (!std::isfinite(out[k]) || !(out[k] > 0.0)) {
            throw NumericError(k, "variance forecast not finite and positive");
        }
    }
    return out;
}

std::vector<double> analytic_forecast(const FitResult& fit, std::size_t horizon, const AnalyticOptions& options) {
    return variance_forecast(fit.spec, fit.params, fit.next_variance(), horizon, options);
}

ForecastResult rolling_forecast(const ReturnSeries& series, const ModelSpec& spec, WindowMethod method, Date start,
                                std::size_t steps, const RollingOptions& options) {
    if (method == WindowMethod::Analytic) {
        throw std::invalid_argument("rolling forecast needs the fixed or expanding method");
    }
    if (steps < 1 || options.window < 1 || options.refit_every < 1) {
        throw std::invalid_argument("steps, window and refit cadence must be at least 1");
    }
    if (series.empty() || series.dates.back() < start) {
        throw RangeError("forecast start " + start.to_string() + " after the end of the series");
    }
    const std::size_t first = lower_bound_index(series.dates, start);
    if (first + steps > series.size()) {
        throw InsufficientDataError("only " + std::to_string(series.size() - first) +
                                    " observations on or after " + start.to_string() + ", need " +
                                    std::to_string(steps));
    }
    const bool estimate = !options.params.has_value();
    const std::size_t history_needed =
        std::max(estimate ? options.min_train : std::size_t{1}, method == WindowMethod::Fixed ? options.window : 1);
    if (first < history_needed) {
        throw InsufficientDataError("forecast start leaves " + std::to_string(first) +
                                    " training observations, need " + std::to_string(history_needed));
    }

    const std::span<const double> data(series.values);
    FitOptions fit_options = options.fit;
    fit_options.min_obs = std::min(fit_options.min_obs, options.min_train);

    ForecastResult out;
    out.method = method;
    out.window = method == WindowMethod::Fixed ? options.window : 0;
    out.refit_every = options.refit_every;
    out.spec = spec;

    GarchParams fixed_params;
    if (method == WindowMethod::Fixed) {
        if (estimate) {
            touch(options, 0, first);
            fixed_params = fit(spec, data.first(first), fit_options).params;
        } else {
            fixed_params = *options.params;
        }
    }

    std::size_t round_index = 0;
    for (std::size_t done = 0; done < steps; done += options.refit_every, ++round_index) {
        ForecastRound round;
        round.origin = first + done;
        round.origin_date = series.dates[round.origin];
        round.forecasts = std::min(options.refit_every, steps - done);

        try {
            if (method == WindowMethod::Expanding) {
                round.train_begin = 0;
                round.train_end = round.origin;
                touch(options, 0, round.origin);
                round.params = estimate ? fit(spec, data.first(round.origin), fit_options).params : *options.params;
            } else {
                round.train_begin = round.origin - options.window;
                round.train_end = round.origin;
                touch(options, round.train_begin, round.train_end);
                round.params = fixed_params;
            }
            const double v1 =
                next_variance(spec, round.params, data.subspan(round.train_begin, round.train_end - round.train_begin));
            AnalyticOptions analytic = options.analytic;
            analytic.seed = options.analytic.seed + round_index;
            const auto var = variance_forecast(spec, round.params, v1, round.forecasts, analytic);
            for (std::size_t k = 0; k < round.forecasts; ++k) {
                out.dates.push_back(series.dates[round.origin + k]);
                out.vol_forecast.push_back(std::sqrt(var[k]));
            }
        } catch (const Error& e) {
            round.skipped = true;
            round.forecasts = 0;
            round.note = e.what();
            out.warnings.push_back("round at " + round.origin_date.to_string() + " skipped: " + e.what());
        }
        out.rounds.push_back(std::move(round));
    }
    return out;
}

void write_forecast_csv(std::ostream& out, const ForecastResult& forecast) {
    out << "date,vol_forecast\n";
    char buf[64];
    for (std::size_t i = 0; i < forecast.dates.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", forecast.vol_forecast[i]);
        out << forecast.dates[i].to_string() << ',' << buf << '\n';
    }
}

}  // namespace volcast
