#include "volcast/simulate.hpp"

#include <cmath>

#include "volcast/error.hpp"

namespace volcast {

Date simulation_start_date() { return Date(2010, 1, 4); }

SimulatedPath simulate_path(const ModelSpec& spec, const GarchParams& params, std::size_t n,
                            std::size_t burn_in, std::uint64_t seed) {
    validate(spec, params);
    if (n < 1) {
        throw std::invalid_argument("simulation length must be at least 1");
    }
    double variance = long_run_variance(spec, params);
    if (!std::isfinite(variance) || !(variance > 0.0)) {
        throw ValidationError("parameters have no finite long-run variance");
    }

    SimulatedPath path;
    path.spec = spec;
    path.params = params;
    path.seed = seed;
    path.burn_in = burn_in;
    path.returns.kind = ReturnKind::Log;
    path.returns.source_symbol = "SIM";
    path.returns.values.reserve(n);
    path.innovations.reserve(n);
    path.true_variance.reserve(n);

    const VarianceRecursion recursion(spec, params);
    const double mu = spec.mean == MeanModel::Constant ? params.mu : 0.0;
    Rng rng(seed);
    Date date = simulation_start_date();
    for (std::size_t t = 0; t < burn_in + n; ++t) {
        const double z = draw(params.dist, rng);
        const double eps = std::sqrt(variance) * z;
        if (t >= burn_in) {
            path.true_variance.push_back(variance);
            path.innovations.push_back(eps);
            path.returns.values.push_back(mu + eps);
            path.returns.dates.push_back(date);
            date = date.next_business_day();
        }
        variance = recursion.next(eps, variance);
        if (!std::isfinite(variance) || !(variance > 0.0)) {
            throw NumericError(t, "simulated variance not finite and positive");
        }
    }
    path.true_sigma.resize(n);
    for (std::size_t t = 0; t < n; ++t) path.true_sigma[t] = std::sqrt(path.true_variance[t]);
    return path;
}

PriceSeries to_price_series(const SimulatedPath& path, const std::string& symbol) {
    PriceSeries prices;
    prices.symbol = symbol;
    const std::size_t n = path.returns.size();
    prices.dates.reserve(n + 1);
    prices.close.reserve(n + 1);
    prices.dates.push_back(path.returns.dates.front().previous_business_day());
    double log_price = std::log(100.0);
    prices.close.push_back(100.0);
    for (std::size_t t = 0; t < n; ++t) {
        log_price += path.returns.values[t] / 100.0;
        prices.dates.push_back(path.returns.dates[t]);
        prices.close.push_back(std::exp(log_price));
    }
    prices.open = prices.close;
    prices.high = prices.close;
    prices.low = prices.close;
    prices.adj_close = prices.close;
    prices.volume.assign(n + 1, 0.0);
    return prices;
}

RoundTripReport round_trip(const ModelSpec& spec, const GarchParams& params, std::size_t n, std::uint64_t seed,
                           std::size_t burn_in) {
    const auto path = simulate_path(spec, params, n, burn_in, seed);
    ModelSpec fit_spec = spec;
    fit_spec.dist = params.dist;
    FitOptions options;
    options.min_obs = 10;

    RoundTripReport report;
    report.truth = params;
    report.fit = fit(fit_spec, path.returns.values, options);
    const auto names = parameter_names(spec);
    const auto truth = to_vector(spec, params);
    const auto estimate = to_vector(spec, report.fit.params);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double err = std::abs(estimate[i] - truth[i]);
        report.abs_errors.emplace_back(names[i], err);
        if (names[i] != "mu" && names[i] != "nu" && names[i] != "lambda") {
            report.max_abs_error = std::max(report.max_abs_error, err);
        }
    }
    return report;
}

}  // namespace volcast
