#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "volcast/arma.hpp"
#include "volcast/descriptive.hpp"
#include "volcast/error.hpp"
#include "volcast/simulate.hpp"
#include "volcast/timeseries.hpp"

namespace volcast::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collects output files in memory and writes them together, so a failing
/// command leaves nothing behind.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
    void add_json(const std::string& name, const ordered_json& j) { add(name, j.dump(2) + "\n"); }

    void commit() const {
        fs::create_directories(dir_);
        std::vector<fs::path> written;
        try {
            for (const auto& [name, content] : files_) {
                const auto path = dir_ / name;
                std::ofstream out(path, std::ios::binary | std::ios::trunc);
                written.push_back(path);
                out << content;
                out.close();
                if (!out) {
                    throw fs::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
                }
            }
        } catch (...) {
            std::error_code ignored;
            for (const auto& p : written) fs::remove(p, ignored);
            throw;
        }
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Input {
    std::string symbol;
    PriceSeries prices;
    ReturnSeries returns;
    fs::path out_dir;
};

std::vector<Input> load_inputs(const RunConfig& config) {
    if (config.inputs.empty()) {
        throw UsageError("--input is required");
    }
    if (config.returns != "log" && config.returns != "simple") {
        throw UsageError("--returns must be log or simple");
    }
    const auto field = config.use_adj_close ? PriceField::AdjClose : PriceField::Close;
    std::vector<Input> out;
    for (const auto& path : config.inputs) {
        Input in;
        in.symbol = config.symbol.empty() || config.inputs.size() > 1 ? path.stem().string() : config.symbol;
        in.prices = read_ohlcv_csv(path, in.symbol);
        in.returns = config.returns == "log" ? log_returns(in.prices, field) : simple_returns(in.prices, field);
        in.out_dir = config.inputs.size() > 1 ? config.output / in.symbol : config.output;
        out.push_back(std::move(in));
    }
    return out;
}

std::string dated_csv(const std::vector<Date>& dates, const std::vector<double>& values) {
    ReturnSeries s;
    s.dates = dates;
    s.values = values;
    std::ostringstream os;
    write_returns_csv(os, s);
    return os.str();
}

ordered_json stats_json(const DescriptiveStats& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"n", s.n}};
}

RealizedProxy parse_proxy(const std::string& s) {
    if (s == "abs") return RealizedProxy::AbsReturn;
    if (s == "squared") return RealizedProxy::SquaredReturn;
    throw UsageError("--proxy must be abs or squared");
}

WindowMethod parse_method(const std::string& s) {
    if (s == "fixed") return WindowMethod::Fixed;
    if (s == "expanding") return WindowMethod::Expanding;
    throw UsageError("--method must be fixed or expanding");
}

Date parse_date_flag(const std::string& s) {
    try {
        return Date::parse(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--split-date: ") + e.what());
    }
}

}  // namespace

ModelSpec parse_spec(const RunConfig& config) {
    ModelSpec spec;
    if (config.model == "garch") spec.variance = VarianceModel::Garch11;
    else if (config.model == "gjr") spec.variance = VarianceModel::GjrGarch111;
    else if (config.model == "egarch") spec.variance = VarianceModel::Egarch111;
    else throw UsageError("--model must be garch, gjr or egarch");

    if (config.mean == "constant") spec.mean = MeanModel::Constant;
    else if (config.mean == "zero") spec.mean = MeanModel::Zero;
    else throw UsageError("--mean must be constant or zero");

    const double nu = config.nu.value_or(8.0);
    if (config.dist == "normal") spec.dist = Normal{};
    else if (config.dist == "t") spec.dist = StudentT{nu};
    else if (config.dist == "skewt") spec.dist = SkewT{nu, config.lambda.value_or(0.0)};
    else throw UsageError("--dist must be normal, t or skewt");
    return spec;
}

GarchParams simulation_params(const RunConfig& config) {
    const auto spec = parse_spec(config);
    GarchParams p;
    switch (spec.variance) {
        case VarianceModel::Garch11:
            p.omega = 0.1, p.alpha = 0.08, p.beta = 0.90;
            break;
        case VarianceModel::GjrGarch111:
            p.omega = 0.1, p.alpha = 0.01, p.gamma = 0.08, p.beta = 0.92;
            break;
        case VarianceModel::Egarch111:
            p.omega = 0.03, p.alpha = 0.10, p.gamma = -0.06, p.beta = 0.97;
            break;
    }
    p.mu = config.mu.value_or(spec.mean == MeanModel::Constant ? 0.05 : 0.0);
    p.omega = config.omega.value_or(p.omega);
    p.alpha = config.alpha.value_or(p.alpha);
    p.beta = config.beta.value_or(p.beta);
    p.gamma = config.gamma.value_or(p.gamma);
    p.dist = spec.dist;
    return p;
}

void cmd_stats(const RunConfig& config) {
    for (const auto& in : load_inputs(config)) {
        const auto& r = in.returns.values;
        const auto stats = moments(r);
        const auto acf = correlogram(r, config.max_lag, CorrelogramKind::ACF);
        const auto pacf = correlogram(r, config.max_lag, CorrelogramKind::PACF);
        const auto& levels = config.use_adj_close ? in.prices.adj_close : in.prices.close;
        const auto vol = volatility_summary(in.returns, levels, config.hurst_max_lag);

        OutputSet out(in.out_dir);
        ordered_json mj{{"symbol", in.symbol}, {"returns", config.returns}, {"kurtosis_convention", "excess"}};
        mj.update(stats_json(stats));
        mj["max_lag"] = config.max_lag;
        mj["acf_last_significant_lag"] = acf.last_significant_lag;
        mj["pacf_last_significant_lag"] = pacf.last_significant_lag;
        out.add_json("moments.json", mj);
        out.add_json("vol_summary.json", {{"symbol", in.symbol},
                                          {"daily_vol", vol.daily_vol},
                                          {"monthly_vol", vol.monthly_vol},
                                          {"annual_vol", vol.annual_vol},
                                          {"hurst", vol.hurst},
                                          {"hurst_max_lag", config.hurst_max_lag},
                                          {"n", r.size()}});
        std::ostringstream acf_csv, pacf_csv, qq_csv;
        write_correlogram_csv(acf_csv, acf);
        write_correlogram_csv(pacf_csv, pacf);
        write_qq_csv(qq_csv, qq_points(r));
        out.add("acf.csv", acf_csv.str());
        out.add("pacf.csv", pacf_csv.str());
        out.add("qq.csv", qq_csv.str());
        out.commit();
    }
}

void cmd_fit(const RunConfig& config) {
    const auto spec = parse_spec(config);
    for (const auto& in : load_inputs(config)) {
        OutputSet out(in.out_dir);
        FitResult result;
        if (spec.mean == MeanModel::Zero) {
            const auto arma = select_arma(in.returns);
            ordered_json aj{{"symbol", in.symbol}};
            aj.update(to_json(arma));
            out.add_json("arma.json", aj);
            result = fit_on_arma_residuals(arma, spec);
        } else {
            result = fit(spec, in.returns.values);
        }
        ordered_json fj{{"symbol", in.symbol}, {"returns", config.returns}};
        fj.update(to_json(result));
        out.add_json("fit.json", fj);
        out.add("cond_vol.csv", dated_csv(in.returns.dates, result.cond_vol));
        out.add("std_resid.csv", dated_csv(in.returns.dates, result.std_residuals));
        out.commit();
    }
}

void cmd_backtest(const RunConfig& config) {
    const auto spec = parse_spec(config);
    if (!config.split_date) {
        throw UsageError("--split-date is required for backtest");
    }
    const Date split = parse_date_flag(*config.split_date);
    const auto method = parse_method(config.method);
    const auto proxy = parse_proxy(config.proxy);
    for (const auto& in : load_inputs(config)) {
        const auto [train, test] = split_at(in.returns, split);
        if (train.size() < 250) {
            throw InsufficientDataError(in.symbol + ": split date leaves " + std::to_string(train.size()) +
                                        " training observations, need at least 250");
        }
        const std::size_t steps = config.steps == 0 ? test.size() : config.steps;
        RollingOptions options;
        options.window = config.window;
        options.refit_every = config.refit_every;
        options.analytic.seed = config.seed;
        const auto forecast = rolling_forecast(in.returns, spec, method, split, steps, options);
        const auto report = error_metrics(forecast, realized_proxy(test, proxy), proxy);

        std::size_t skipped = 0;
        for (const auto& r : forecast.rounds) skipped += r.skipped ? 1 : 0;
        ordered_json bj{{"symbol", in.symbol}, {"model", describe(spec)}, {"method", to_string(method)}};
        bj.update(to_json(report));
        bj["window"] = config.window;
        bj["refit_every"] = config.refit_every;
        bj["steps"] = steps;
        bj["rounds"] = forecast.rounds.size();
        bj["skipped_rounds"] = skipped;
        bj["warnings"] = forecast.warnings;

        OutputSet out(in.out_dir);
        std::ostringstream fc;
        write_forecast_csv(fc, forecast);
        out.add("forecast.csv", fc.str());
        out.add_json("backtest.json", bj);
        out.add("backtest.csv",
                backtest_csv_header() + "\n" + backtest_csv_row(report, in.symbol, config.model) + "\n");
        out.commit();
    }
}

void cmd_simulate(const RunConfig& config) {
    const auto spec = parse_spec(config);
    const auto params = simulation_params(config);
    const auto path = simulate_path(spec, params, config.n, config.burn_in, config.seed);
    const std::string symbol = config.symbol.empty() ? "SIM" : config.symbol;

    OutputSet out(config.output);
    std::ostringstream prices;
    write_ohlcv_csv(prices, to_price_series(path, symbol));
    out.add("prices.csv", prices.str());
    out.add("true_sigma.csv", dated_csv(path.returns.dates, path.true_sigma));
    ordered_json pj = ordered_json::object();
    const auto names = parameter_names(spec);
    const auto values = to_vector(spec, params);
    for (std::size_t i = 0; i < names.size(); ++i) pj[names[i]] = values[i];
    out.add_json("params.json", {{"symbol", symbol},
                                 {"model", {{"mean", to_string(spec.mean)},
                                            {"variance", to_string(spec.variance)},
                                            {"dist", distribution_name(spec.dist)}}},
                                 {"params", pj},
                                 {"n", config.n},
                                 {"burn_in", config.burn_in},
                                 {"seed", config.seed}});
    out.commit();
}

int run(int argc, char** argv) {
    CLI::App app{"Volatility modeling toolkit: return diagnostics, GARCH-family estimation, "
                 "rolling forecasts and backtests"};
    app.require_subcommand(1);
    RunConfig config;
    std::vector<std::string> inputs;

    auto add_data_flags = [&](CLI::App* cmd) {
        cmd->add_option("--input", inputs, "OHLCV CSV file(s)")->required();
        cmd->add_option("--symbol", config.symbol, "Instrument label (default: file stem)");
        cmd->add_option("--returns", config.returns, "log or simple")->capture_default_str();
        cmd->add_flag("--use-adj-close", config.use_adj_close, "Use adj_close instead of close");
        cmd->add_option("--output", config.output, "Output directory")->capture_default_str();
    };
    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--model", config.model, "garch, gjr or egarch")->capture_default_str();
        cmd->add_option("--dist", config.dist, "normal, t or skewt")->capture_default_str();
        cmd->add_option("--mean", config.mean, "constant or zero")->capture_default_str();
        cmd->add_option("--seed", config.seed, "Random seed (VOLCAST_SEED overrides)")->capture_default_str();
    };

    auto* stats = app.add_subcommand("stats", "Moments, volatility summary, Hurst exponent, ACF/PACF, Q-Q data");
    add_data_flags(stats);
    stats->add_option("--max-lag", config.max_lag, "Correlogram lags")->capture_default_str();
    stats->add_option("--hurst-max-lag", config.hurst_max_lag, "Hurst regression lags")->capture_default_str();

    auto* fitc = app.add_subcommand("fit", "Fit a GARCH-family model (zero mean runs auto-ARMA first)");
    add_data_flags(fitc);
    add_model_flags(fitc);

    auto* back = app.add_subcommand("backtest", "Rolling out-of-sample forecasts scored by MAE/RMSE");
    add_data_flags(back);
    add_model_flags(back);
    back->add_option("--split-date", config.split_date, "First out-of-sample date (YYYY-MM-DD)")->required();
    back->add_option("--method", config.method, "fixed or expanding")->capture_default_str();
    back->add_option("--window", config.window, "Fixed-window length")->capture_default_str();
    back->add_option("--refit-every", config.refit_every, "Forecast days per round")->capture_default_str();
    back->add_option("--steps", config.steps, "Forecast count (default: all after split)");
    back->add_option("--proxy", config.proxy, "abs or squared")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Simulate a price path from known parameters");
    add_model_flags(sim);
    sim->add_option("--symbol", config.symbol, "Symbol written to the CSV");
    sim->add_option("--output", config.output, "Output directory")->capture_default_str();
    sim->add_option("--n", config.n, "Observations")->capture_default_str();
    sim->add_option("--burn-in", config.burn_in, "Discarded warm-up steps")->capture_default_str();
    sim->add_option("--mu", config.mu);
    sim->add_option("--omega", config.omega);
    sim->add_option("--alpha", config.alpha);
    sim->add_option("--beta", config.beta);
    sim->add_option("--gamma", config.gamma);
    sim->add_option("--nu", config.nu);
    sim->add_option("--lambda", config.lambda);
    fitc->add_option("--nu", config.nu, "Starting degrees of freedom");
    back->add_option("--nu", config.nu, "Starting degrees of freedom");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    for (const auto& s : inputs) config.inputs.emplace_back(s);
    if (const char* env = std::getenv("VOLCAST_SEED"); env && *env) {
        try {
            config.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: VOLCAST_SEED is not an unsigned integer\n";
            return kUsage;
        }
    }

    try {
        if (stats->parsed()) cmd_stats(config);
        else if (fitc->parsed()) cmd_fit(config);
        else if (back->parsed()) cmd_backtest(config);
        else if (sim->parsed()) cmd_simulate(config);
        return kOk;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const EstimationError& e) {
        std::cerr << "estimation failed: " << e.what() << "\n";
        return kEstimationError;
    } catch (const NumericError& e) {
        std::cerr << "estimation failed: " << e.what() << "\n";
        return kEstimationError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace volcast::cli
