#include "volcast/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/normal.hpp>

#include "volcast/error.hpp"

namespace volcast {

namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> acf_values(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    const double mu = mean_of(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mu) * (v - mu);
    if (c0 == 0.0) {
        throw DegenerateSeriesError("correlogram of a constant series");
    }
    std::vector<double> r(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) ck += (x[t] - mu) * (x[t + k] - mu);
        r[k - 1] = ck / c0;
    }
    return r;
}

// Durbin-Levinson: phi_kk from autocorrelations rho(1..K).
std::vector<double> pacf_from_acf(const std::vector<double>& rho) {
    const std::size_t max_lag = rho.size();
    std::vector<double> pacf(max_lag);
    std::vector<double> phi(max_lag + 1, 0.0), prev(max_lag + 1, 0.0);
    double v = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = rho[k - 1];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j] * rho[k - j - 1];
        const double phikk = v > 0.0 ? num / v : 0.0;
        phi[k] = phikk;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phikk * prev[k - j];
        v *= (1.0 - phikk * phikk);
        pacf[k - 1] = phikk;
        prev = phi;
    }
    return pacf;
}

}  // namespace

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) {
        throw InsufficientDataError("standard deviation needs at least 2 values");
    }
    const double mu = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

DescriptiveStats moments(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) {
        throw InsufficientDataError("moments need at least 4 values, got " + std::to_string(n));
    }
    const double mu = mean_of(values);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if (m2 == 0.0) {
        throw DegenerateSeriesError("moments of a constant series");
    }
    const double nn = static_cast<double>(n);
    DescriptiveStats s;
    s.n = n;
    s.mean = mu;
    s.sd = std::sqrt(m2 / (nn - 1.0));
    m2 /= nn;
    m3 /= nn;
    m4 /= nn;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

double hurst_exponent(std::span<const double> values, std::size_t max_lag) {
    if (max_lag < 3) {
        throw std::invalid_argument("hurst max_lag must be at least 3");
    }
    if (values.size() < 2 * max_lag) {
        throw InsufficientDataError("hurst exponent needs at least " + std::to_string(2 * max_lag) +
                                    " points, got " + std::to_string(values.size()));
    }
    std::vector<double> log_lag, log_sd;
    for (std::size_t lag = 2; lag <= max_lag; ++lag) {
        double ss = 0.0;
        for (std::size_t t = 0; t + lag < values.size(); ++t) {
            const double d = values[t + lag] - values[t];
            ss += d * d;
        }
        const double s = std::sqrt(ss / static_cast<double>(values.size() - lag));
        if (!(s > 0.0)) {
            throw DegenerateSeriesError("zero dispersion at lag " + std::to_string(lag));
        }
        log_lag.push_back(std::log(static_cast<double>(lag)));
        log_sd.push_back(std::log(s));
    }
    const double mx = mean_of(log_lag);
    const double my = mean_of(log_sd);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_lag.size(); ++i) {
        sxy += (log_lag[i] - mx) * (log_sd[i] - my);
        sxx += (log_lag[i] - mx) * (log_lag[i] - mx);
    }
    return std::clamp(sxy / sxx, 0.0, 1.0);
}

VolatilitySummary scale_daily_volatility(double daily_vol, double hurst) {
    VolatilitySummary s;
    s.daily_vol = daily_vol;
    s.monthly_vol = daily_vol * std::sqrt(kTradingDaysPerMonth);
    s.annual_vol = daily_vol * std::sqrt(kTradingDaysPerYear);
    s.hurst = hurst;
    return s;
}

VolatilitySummary volatility_summary(const ReturnSeries& returns,
                                     std::span<const double> levels_for_hurst,
                                     std::size_t hurst_max_lag) {
    const double daily = sample_sd(returns.values);
    return scale_daily_volatility(daily, hurst_exponent(levels_for_hurst, hurst_max_lag));
}

Correlogram correlogram(std::span<const double> values, std::size_t max_lag, CorrelogramKind kind) {
    if (max_lag < 1) {
        throw std::invalid_argument("correlogram max_lag must be at least 1");
    }
    if (values.size() <= max_lag + 1) {
        throw InsufficientDataError("correlogram with max lag " + std::to_string(max_lag) +
                                    " needs more than " + std::to_string(max_lag + 1) + " points");
    }
    Correlogram c;
    c.kind = kind;
    c.n = values.size();
    c.conf_band = 1.96 / std::sqrt(static_cast<double>(values.size()));
    auto rho = acf_values(values, max_lag);
    c.values = kind == CorrelogramKind::ACF ? std::move(rho) : pacf_from_acf(rho);
    c.lags.resize(max_lag);
    std::iota(c.lags.begin(), c.lags.end(), std::size_t{1});
    for (std::size_t k = max_lag; k >= 1; --k) {
        if (std::abs(c.values[k - 1]) > c.conf_band) {
            c.last_significant_lag = k;
            break;
        }
    }
    return c;
}

std::vector<QQPoint> qq_points(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) {
        throw InsufficientDataError("Q-Q plot needs at least 3 values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double mu = mean_of(sorted);
    const double sd = sample_sd(sorted);
    const boost::math::normal_distribution<double> standard;
    std::vector<QQPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        out[i] = {mu + sd * boost::math::quantile(standard, p), sorted[i]};
    }
    return out;
}

void write_correlogram_csv(std::ostream& out, const Correlogram& c) {
    out << "lag,value,band\n";
    char buf[96];
    for (std::size_t i = 0; i < c.lags.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", c.lags[i], c.values[i], c.conf_band);
        out << buf;
    }
}

void write_qq_csv(std::ostream& out, const std::vector<QQPoint>& points) {
    out << "theoretical,sample\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", p.theoretical, p.sample);
        out << buf;
    }
}

}  // namespace volcast
