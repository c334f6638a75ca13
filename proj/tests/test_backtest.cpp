#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "volcast/backtest.hpp"
#include "volcast/error.hpp"

using namespace volcast;

namespace {

std::vector<Date> days(std::size_t n, Date from = Date(2021, 1, 4)) {
    std::vector<Date> d;
    for (std::size_t i = 0; i < n; ++i, from = from.next_business_day()) d.push_back(from);
    return d;
}

}  // namespace

TEST_SUITE("backtest") {

TEST_CASE("realized proxies") {
    auto r = testing::series_from({-3.0, 4.0});
    CHECK(realized_proxy(r, RealizedProxy::AbsReturn).values == std::vector<double>{3.0, 4.0});
    CHECK(realized_proxy(r, RealizedProxy::SquaredReturn).values == std::vector<double>{9.0, 16.0});
    auto z = testing::series_from({0.0, 0.0, 0.0});
    CHECK(realized_proxy(z, RealizedProxy::AbsReturn).values == std::vector<double>(3, 0.0));
    CHECK(realized_proxy(z, RealizedProxy::AbsReturn).dates == z.dates);
}

TEST_CASE("hand fixture") {
    const auto d = days(2);
    const std::vector<double> f{1, 2}, x{2, 4};
    const auto r = error_metrics(d, f, d, x);
    CHECK(r.mae == 1.5);
    CHECK(std::abs(r.rmse - 1.5811) < 1e-4);
    CHECK(r.rmse == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
    CHECK(r.n == 2);
}

TEST_CASE("perfect forecast") {
    const auto d = days(5);
    const std::vector<double> f{1.1, 0.4, 2.3, 0.9, 1.7};
    const auto r = error_metrics(d, f, d, f);
    CHECK(r.mae == 0.0);
    CHECK(r.rmse == 0.0);
}

TEST_CASE("rmse never below mae") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 17;
        const auto d = days(n);
        std::vector<double> f(n), x(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = u(gen), x[i] = trial % 5 == 0 ? f[i] + 0.7 : u(gen);
        const auto r = error_metrics(d, f, d, x);
        CHECK(r.rmse >= r.mae);
    }
}

TEST_CASE("permutation invariance and scaling") {
    const std::size_t n = 40;
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    auto d = days(n);
    std::vector<double> f(n), x(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = u(gen), x[i] = u(gen);
    const auto base = error_metrics(d, f, d, x);

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), gen);
    std::vector<Date> d2(n);
    std::vector<double> f2(n), x2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = d[idx[i]], f2[i] = f[idx[i]], x2[i] = x[idx[i]];
    const auto shuffled = error_metrics(d2, f2, d2, x2);
    CHECK(shuffled.mae == base.mae);
    CHECK(shuffled.rmse == base.rmse);

    const double c = 4.0;  // a power of two keeps the scaling exact in floating point
    for (auto& v : f) v *= c;
    for (auto& v : x) v *= c;
    const auto scaled = error_metrics(d, f, d, x);
    CHECK(scaled.mae == c * base.mae);
    CHECK(scaled.rmse == c * base.rmse);
    for (auto& v : f) v *= 0.3 / c;
    for (auto& v : x) v *= 0.3 / c;
    const auto scaled2 = error_metrics(d, f, d, x);
    CHECK(scaled2.mae == doctest::Approx(0.3 * base.mae).epsilon(1e-13));
    CHECK(scaled2.rmse == doctest::Approx(0.3 * base.rmse).epsilon(1e-13));
}

TEST_CASE("alignment by date") {
    const auto d = days(6);
    const std::vector<Date> fd{d[1], d[2], d[3], d[5]};
    const std::vector<double> f{1.0, 1.0, 1.0, 1.0};
    const std::vector<Date> xd{d[0], d[1], d[2], d[3]};
    const std::vector<double> x{9.0, 2.0, 0.0, 1.0};
    const auto r = error_metrics(fd, f, xd, x);
    CHECK(r.n == 3);
    CHECK(r.dropped == 2);
    CHECK(r.mae == doctest::Approx(2.0 / 3.0));
    CHECK(r.period_start == d[1]);
    CHECK(r.period_end == d[3]);

    const std::vector<Date> other{Date(2030, 1, 1)};
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(error_metrics(other, one, xd, x), AlignmentError);
}

TEST_CASE("squared proxy scores variance forecasts") {
    ForecastResult fr;
    fr.dates = days(2);
    fr.vol_forecast = {1.0, 2.0};
    auto realized = realized_proxy(testing::series_from({1.0, -1.0}), RealizedProxy::SquaredReturn);
    realized.dates = fr.dates;
    const auto r = error_metrics(fr, realized, RealizedProxy::SquaredReturn);
    CHECK(r.mae == 1.5);  // |1-1| and |4-1|
    CHECK(r.proxy == RealizedProxy::SquaredReturn);
}

TEST_CASE("report serialization") {
    const auto d = days(2);
    const std::vector<double> f{1, 2}, x{2, 4};
    const auto r = error_metrics(d, f, d, x);
    CHECK(backtest_csv_header() == "symbol,model,mae,rmse,n");
    CHECK(backtest_csv_row(r, "BAJ", "egarch") == "BAJ,egarch,1.5,1.58113883,2");
    const auto j = to_json(r);
    CHECK(j["mae"] == 1.5);
    CHECK(j["proxy"] == "abs");
    CHECK(j["period_start"] == "2021-01-04");
}

}
