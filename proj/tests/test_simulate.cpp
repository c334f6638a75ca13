#include <doctest.h>

#include <cmath>

#include "volcast/descriptive.hpp"
#include "volcast/error.hpp"
#include "volcast/simulate.hpp"

using namespace volcast;

namespace {

GarchParams params(double omega, double alpha, double beta, double gamma = 0.0) {
    GarchParams p;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    return p;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("degenerate model gives iid returns with variance omega") {
    const std::size_t n = 100000;
    const auto path = simulate_path(ModelSpec{}, params(0.7, 0.0, 0.0), n, 10, 1);
    const double sd = sample_sd(path.returns.values);
    // standard error of a normal sample variance is sigma^2 sqrt(2/n)
    CHECK(std::abs(sd * sd - 0.7) < 3.0 * 0.7 * std::sqrt(2.0 / n));
    for (double v : path.true_variance) CHECK(v == 0.7);
}

TEST_CASE("GARCH sample variance approaches the unconditional level") {
    const auto path = simulate_path(ModelSpec{}, params(0.1, 0.08, 0.9), 100000, 500, 2);
    const double sd = sample_sd(path.returns.values);
    CHECK(sd * sd == doctest::Approx(5.0).epsilon(0.1));
    CHECK(moments(path.returns.values).kurtosis > 0.0);
}

TEST_CASE("same seed, same path") {
    ModelSpec spec;
    spec.variance = VarianceModel::Egarch111;
    spec.dist = SkewT{6, -0.2};
    auto p = params(0.03, 0.1, 0.97, -0.06);
    p.dist = spec.dist;
    const auto a = simulate_path(spec, p, 2000, 100, 77);
    const auto b = simulate_path(spec, p, 2000, 100, 77);
    CHECK(a.returns.values == b.returns.values);
    CHECK(a.true_sigma == b.true_sigma);
    CHECK(a.returns.dates == b.returns.dates);
    const auto c = simulate_path(spec, p, 2000, 100, 78);
    CHECK(a.returns.values != c.returns.values);
}

TEST_CASE("explosive parameters are rejected") {
    CHECK_THROWS_AS(simulate_path(ModelSpec{}, params(0.1, 0.3, 0.75), 100), ValidationError);
}

TEST_CASE("filter on simulated innovations reproduces the true variance") {
    for (auto v : {VarianceModel::Garch11, VarianceModel::GjrGarch111, VarianceModel::Egarch111}) {
        ModelSpec spec;
        spec.variance = v;
        spec.dist = StudentT{7};
        auto p = v == VarianceModel::Egarch111 ? params(0.03, 0.1, 0.97, -0.06) : params(0.1, 0.05, 0.9, 0.06);
        p.mu = 0.04;
        p.dist = spec.dist;
        const auto path = simulate_path(spec, p, 3000, 500, 5);
        const auto var = variance_filter(spec, p, path.innovations, path.true_variance.front());
        CHECK(var == path.true_variance);
        const auto eps = mean_residuals(spec, p, path.returns.values);
        for (std::size_t t = 0; t < eps.size(); ++t) CHECK(std::abs(eps[t] - path.innovations[t]) < 1e-12);
    }
}

TEST_CASE("price series reproduces the simulated log returns") {
    const auto path = simulate_path(ModelSpec{}, params(0.1, 0.08, 0.9), 300, 50, 6);
    const auto prices = to_price_series(path, "ABC");
    CHECK(prices.symbol == "ABC");
    REQUIRE(prices.size() == 301);
    CHECK(prices.close.front() == 100.0);
    CHECK(prices.dates[1] == simulation_start_date());
    const auto r = log_returns(prices);
    CHECK(r.dates == path.returns.dates);
    for (std::size_t t = 0; t < r.size(); ++t) CHECK(r.values[t] == doctest::Approx(path.returns.values[t]).epsilon(1e-9));
}

TEST_CASE("round trip report") {
    auto truth = params(0.1, 0.08, 0.9);
    truth.mu = 0.05;
    const auto rep = round_trip(ModelSpec{}, truth, 5000, 42);
    REQUIRE(rep.abs_errors.size() == 4);
    CHECK(rep.abs_errors[0].first == "mu");
    CHECK(rep.max_abs_error < 0.05);
    double worst = 0.0;
    for (std::size_t i = 1; i < rep.abs_errors.size(); ++i) worst = std::max(worst, rep.abs_errors[i].second);
    CHECK(rep.max_abs_error == worst);
}

TEST_CASE("tiny round trip does not crash") {
    auto truth = params(0.1, 0.08, 0.9);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        try {
            const auto rep = round_trip(ModelSpec{}, truth, 100, seed);
            CHECK(std::isfinite(rep.max_abs_error));
        } catch (const EstimationError&) {
            // an estimation failure on 100 points is an acceptable outcome
        }
    }
}

}
