#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volcast/timeseries.hpp"

namespace volcast {

/// ARIMA-style order with d fixed at 0 (the inputs are already returns).
struct ArmaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
    bool intercept = false;

    friend bool operator==(const ArmaOrder&, const ArmaOrder&) = default;
};

std::string to_string(const ArmaOrder& order);

/// One model tried during order selection.
struct ArmaCandidate {
    ArmaOrder order;
    bool ok = false;
    double bic = 0.0;
    std::string error;
};

struct ArmaFit {
    ArmaOrder order;
    std::vector<double> ar;
    std::vector<double> ma;
    /// Mean of the series implied by the model; 0 when fitted without intercept.
    double intercept_value = 0.0;
    std::vector<double> residuals;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n = 0;
    /// Estimated parameters including the innovation variance.
    int k = 0;
    std::size_t candidates_evaluated = 1;
    std::vector<ArmaCandidate> candidates;
};

/// Conditional-sum-of-squares fit of
///   (x_t - mu) = sum phi_i (x_{t-i} - mu) + e_t + sum theta_j e_{t-j}
/// with pre-sample terms set to zero, so residuals cover every observation.
/// Stationarity and invertibility are enforced through a partial-autocorrelation
/// reparameterization.
ArmaFit fit_arma(std::span<const double> values, const ArmaOrder& order);
inline ArmaFit fit_arma(const ReturnSeries& series, const ArmaOrder& order) {
    return fit_arma(series.values, order);
}

struct ArmaSelectOptions {
    int max_p = 5;
    int max_q = 5;
    /// Hard cap on the number of candidate fits.
    std::size_t max_candidates = 100;
};

/// Stepwise search by BIC starting from (0,0,0) and (1,0,1), each with and
/// without intercept. Neighbors are unit moves in p and/or q and an intercept
/// toggle. Ties go to smaller p + q, then smaller q, then no intercept.
ArmaFit select_arma(std::span<const double> values, const ArmaSelectOptions& options = {});
inline ArmaFit select_arma(const ReturnSeries& series, const ArmaSelectOptions& options = {}) {
    return select_arma(series.values, options);
}

/// Largest modulus among the reciprocal roots of 1 - c_1 z - ... - c_k z^k
/// (the companion-matrix eigenvalues). Below 1 means all roots lie outside the unit circle.
double max_inverse_root(std::span<const double> coeffs);

nlohmann::ordered_json to_json(const ArmaFit& fit);

}  // namespace volcast
