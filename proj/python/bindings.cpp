#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "volcast/volcast.hpp"

namespace py = pybind11;
using namespace volcast;
using nlohmann::ordered_json;

namespace {

py::object to_py(const ordered_json& j) {
    switch (j.type()) {
        case ordered_json::value_t::null:
            return py::none();
        case ordered_json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case ordered_json::value_t::number_integer:
            return py::int_(j.get<std::int64_t>());
        case ordered_json::value_t::number_unsigned:
            return py::int_(j.get<std::uint64_t>());
        case ordered_json::value_t::number_float:
            return py::float_(j.get<double>());
        case ordered_json::value_t::string:
            return py::str(j.get<std::string>());
        case ordered_json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(to_py(v));
            return out;
        }
        default: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
            return out;
        }
    }
}

VarianceModel variance_model(const std::string& s) {
    if (s == "garch") return VarianceModel::Garch11;
    if (s == "gjr") return VarianceModel::GjrGarch111;
    if (s == "egarch") return VarianceModel::Egarch111;
    throw std::invalid_argument("model must be garch, gjr or egarch, got '" + s + "'");
}

ResidualDistribution distribution(const std::string& s, double nu, double lambda) {
    if (s == "normal") return Normal{};
    if (s == "t") return StudentT{nu};
    if (s == "skewt") return SkewT{nu, lambda};
    throw std::invalid_argument("dist must be normal, t or skewt, got '" + s + "'");
}

ModelSpec make_spec(const std::string& model, const std::string& dist, const std::string& mean, double nu,
                    double lambda) {
    ModelSpec spec;
    spec.variance = variance_model(model);
    spec.dist = distribution(dist, nu, lambda);
    if (mean == "zero") {
        spec.mean = MeanModel::Zero;
    } else if (mean != "constant") {
        throw std::invalid_argument("mean must be constant or zero, got '" + mean + "'");
    }
    return spec;
}

GarchParams params_from(const ModelSpec& spec, const py::dict& d) {
    GarchParams p;
    p.dist = spec.dist;
    auto get = [&](const char* k, double fallback) { return d.contains(k) ? d[k].cast<double>() : fallback; };
    p.mu = get("mu", 0.0);
    p.omega = get("omega", 0.0);
    p.alpha = get("alpha", 0.0);
    p.beta = get("beta", 0.0);
    p.gamma = get("gamma", 0.0);
    if (auto* t = std::get_if<StudentT>(&p.dist)) t->nu = get("nu", t->nu);
    if (auto* s = std::get_if<SkewT>(&p.dist)) {
        s->nu = get("nu", s->nu);
        s->lambda = get("lambda", s->lambda);
    }
    return p;
}

ReturnSeries series_from(const std::vector<std::string>& dates, const std::vector<double>& values) {
    if (dates.size() != values.size()) throw std::invalid_argument("dates and values differ in length");
    ReturnSeries s;
    s.values = values;
    for (const auto& d : dates) s.dates.push_back(Date::parse(d));
    return s;
}

std::vector<std::string> date_strings(const std::vector<Date>& dates) {
    std::vector<std::string> out;
    out.reserve(dates.size());
    for (const auto& d : dates) out.push_back(d.to_string());
    return out;
}

WindowMethod window_method(const std::string& s) {
    if (s == "fixed") return WindowMethod::Fixed;
    if (s == "expanding") return WindowMethod::Expanding;
    throw std::invalid_argument("method must be fixed or expanding, got '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_volcast, m) {
    m.doc() = "Conditional-volatility modelling: GARCH-family estimation, forecasting and backtesting.";

    const auto& base = py::register_exception<Error>(m, "VolcastError");
    py::register_exception<EstimationError>(m, "EstimationError", base);

    m.def(
        "load_returns",
        [](const std::string& path, const std::string& kind, bool use_adj_close) {
            const auto prices = read_ohlcv_csv(path, "");
            const auto field = use_adj_close ? PriceField::AdjClose : PriceField::Close;
            if (kind != "log" && kind != "simple") throw std::invalid_argument("kind must be log or simple");
            const auto r = kind == "log" ? log_returns(prices, field) : simple_returns(prices, field);
            return py::make_tuple(date_strings(r.dates), r.values);
        },
        py::arg("path"), py::arg("kind") = "log", py::arg("use_adj_close") = false,
        "Read an OHLCV CSV and return (dates, percent returns).");

    m.def(
        "moments",
        [](const std::vector<double>& x) {
            const auto s = moments(x);
            py::dict d;
            d["mean"] = s.mean, d["sd"] = s.sd, d["skewness"] = s.skewness, d["kurtosis"] = s.kurtosis, d["n"] = s.n;
            return d;
        },
        py::arg("values"));

    m.def(
        "volatility_summary",
        [](double daily_vol, double hurst) {
            const auto s = scale_daily_volatility(daily_vol, hurst);
            py::dict d;
            d["daily_vol"] = s.daily_vol, d["monthly_vol"] = s.monthly_vol, d["annual_vol"] = s.annual_vol;
            d["hurst"] = s.hurst;
            return d;
        },
        py::arg("daily_vol"), py::arg("hurst") = 0.5);

    m.def("hurst_exponent", [](const std::vector<double>& x, std::size_t max_lag) { return hurst_exponent(x, max_lag); },
          py::arg("values"), py::arg("max_lag") = 100);

    m.def(
        "correlogram",
        [](const std::vector<double>& x, std::size_t max_lag, const std::string& kind) {
            if (kind != "acf" && kind != "pacf") throw std::invalid_argument("kind must be acf or pacf");
            const auto c = correlogram(x, max_lag, kind == "acf" ? CorrelogramKind::ACF : CorrelogramKind::PACF);
            py::dict d;
            d["lags"] = c.lags, d["values"] = c.values, d["conf_band"] = c.conf_band;
            d["last_significant_lag"] = c.last_significant_lag;
            return d;
        },
        py::arg("values"), py::arg("max_lag") = 40, py::arg("kind") = "acf");

    m.def(
        "select_arma",
        [](const std::vector<double>& x, int max_p, int max_q) {
            const auto f = select_arma(x, ArmaSelectOptions{max_p, max_q});
            py::dict d = to_py(to_json(f));
            d["residuals"] = f.residuals;
            return d;
        },
        py::arg("values"), py::arg("max_p") = 5, py::arg("max_q") = 5);

    m.def(
        "log_likelihood",
        [](const std::vector<double>& x, const py::dict& params, const std::string& model, const std::string& dist,
           const std::string& mean) {
            const auto spec = make_spec(model, dist, mean, 8.0, 0.0);
            return log_likelihood(spec, params_from(spec, params), x);
        },
        py::arg("values"), py::arg("params"), py::arg("model") = "garch", py::arg("dist") = "normal",
        py::arg("mean") = "constant");

    m.def(
        "fit",
        [](const std::vector<double>& x, const std::string& model, const std::string& dist, const std::string& mean,
           double nu, double lambda) {
            const auto f = fit(make_spec(model, dist, mean, nu, lambda), x);
            py::dict d = to_py(to_json(f));
            d["cond_vol"] = f.cond_vol;
            d["std_residuals"] = f.std_residuals;
            d["next_variance"] = f.next_variance();
            return d;
        },
        py::arg("values"), py::arg("model") = "garch", py::arg("dist") = "normal", py::arg("mean") = "constant",
        py::arg("nu") = 8.0, py::arg("lambda_") = 0.0, "Maximum-likelihood fit; returns the fit report as a dict.");

    m.def(
        "forecast",
        [](const std::vector<double>& x, std::size_t horizon, const std::string& model, const std::string& dist,
           const std::string& mean, std::uint64_t seed) {
            const auto f = fit(make_spec(model, dist, mean, 8.0, 0.0), x);
            AnalyticOptions opt;
            opt.seed = seed;
            return analytic_forecast(f, horizon, opt);
        },
        py::arg("values"), py::arg("horizon"), py::arg("model") = "garch", py::arg("dist") = "normal",
        py::arg("mean") = "constant", py::arg("seed") = 0, "Fit, then forecast daily volatility (percent).");

    m.def(
        "rolling_forecast",
        [](const std::vector<std::string>& dates, const std::vector<double>& values, const std::string& start,
           std::size_t steps, const std::string& method, const std::string& model, const std::string& dist,
           std::size_t window, std::size_t refit_every, std::uint64_t seed) {
            RollingOptions opt;
            opt.window = window;
            opt.refit_every = refit_every;
            opt.analytic.seed = seed;
            const auto r = rolling_forecast(series_from(dates, values), make_spec(model, dist, "constant", 8.0, 0.0),
                                            window_method(method), Date::parse(start), steps, opt);
            py::dict d;
            d["dates"] = date_strings(r.dates);
            d["vol_forecast"] = r.vol_forecast;
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("dates"), py::arg("values"), py::arg("start"), py::arg("steps"), py::arg("method") = "expanding",
        py::arg("model") = "garch", py::arg("dist") = "normal", py::arg("window") = 5, py::arg("refit_every") = 5,
        py::arg("seed") = 0);

    m.def(
        "error_metrics",
        [](const std::vector<std::string>& forecast_dates, const std::vector<double>& forecast,
           const std::vector<std::string>& realized_dates, const std::vector<double>& realized) {
            const auto f = series_from(forecast_dates, forecast);
            const auto x = series_from(realized_dates, realized);
            return to_py(to_json(error_metrics(f.dates, f.values, x.dates, x.values)));
        },
        py::arg("forecast_dates"), py::arg("forecast"), py::arg("realized_dates"), py::arg("realized"),
        "MAE and RMSE over dates present in both inputs.");

    m.def(
        "simulate",
        [](const py::dict& params, std::size_t n, const std::string& model, const std::string& dist,
           const std::string& mean, std::size_t burn_in, std::uint64_t seed) {
            const auto spec = make_spec(model, dist, mean, 8.0, 0.0);
            const auto path = simulate_path(spec, params_from(spec, params), n, burn_in, seed);
            py::dict d;
            d["dates"] = date_strings(path.returns.dates);
            d["returns"] = path.returns.values;
            d["true_sigma"] = path.true_sigma;
            return d;
        },
        py::arg("params"), py::arg("n"), py::arg("model") = "garch", py::arg("dist") = "normal",
        py::arg("mean") = "constant", py::arg("burn_in") = 500, py::arg("seed") = 0);

    m.def(
        "long_run_variance",
        [](const py::dict& params, const std::string& model) {
            const auto spec = make_spec(model, "normal", "constant", 8.0, 0.0);
            return long_run_variance(spec, params_from(spec, params));
        },
        py::arg("params"), py::arg("model") = "garch");
}
