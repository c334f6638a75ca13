#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "volcast/garch.hpp"
#include "volcast/timeseries.hpp"

namespace volcast {

/// Synthetic returns generated from known parameters.
struct SimulatedPath {
    ReturnSeries returns;
    std::vector<double> innovations;    // e_t = sigma_t z_t
    std::vector<double> true_variance;  // sigma_t^2
    std::vector<double> true_sigma;
    ModelSpec spec;
    GarchParams params;
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
};

/// First date assigned to simulated returns; later ones follow on business days.
Date simulation_start_date();

/// Runs the model recursion generatively: z_t from the innovation law,
/// e_t = sigma_t z_t, r_t = mu + e_t. The recursion starts at the long-run
/// variance and the first `burn_in` steps are discarded. Identical inputs give
/// bit-identical output.
SimulatedPath simulate_path(const ModelSpec& spec, const GarchParams& params, std::size_t n,
                            std::size_t burn_in = 500, std::uint64_t seed = 0);

/// Price series whose log returns are the simulated returns: close starts at 100
/// on the business day before the first return. Open, high, low and adj_close
/// equal close; volume is zero.
PriceSeries to_price_series(const SimulatedPath& path, const std::string& symbol = "SIM");

/// Parameter recovery: simulate, fit the same spec, compare estimates with the truth.
struct RoundTripReport {
    GarchParams truth;
    FitResult fit;
    /// |estimate - truth| per parameter, in `parameter_names` order.
    std::vector<std::pair<std::string, double>> abs_errors;
    /// Largest error over the variance-equation parameters (omega, alpha, gamma, beta).
    double max_abs_error = 0.0;
};

RoundTripReport round_trip(const ModelSpec& spec, const GarchParams& params, std::size_t n,
                           std::uint64_t seed, std::size_t burn_in = 500);

}  // namespace volcast
