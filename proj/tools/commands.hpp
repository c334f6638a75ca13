#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "volcast/backtest.hpp"
#include "volcast/forecast.hpp"
#include "volcast/garch.hpp"

namespace volcast::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIoError = 2,
    kDataError = 3,
    kEstimationError = 4,
};

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::string symbol;
    std::string model = "garch";
    std::string dist = "normal";
    std::string mean = "constant";
    std::string returns = "log";
    bool use_adj_close = false;
    std::optional<std::string> split_date;
    std::string method = "expanding";
    std::size_t window = 5;
    std::size_t refit_every = 5;
    /// 0 means every observation from the split date on.
    std::size_t steps = 0;
    std::string proxy = "abs";
    std::uint64_t seed = 0;
    std::filesystem::path output = ".";
    std::size_t max_lag = 100;
    std::size_t hurst_max_lag = 100;

    // simulate
    std::size_t n = 2800;
    std::size_t burn_in = 500;
    std::optional<double> mu, omega, alpha, beta, gamma, nu, lambda;
};

/// Model spec from the `--model`, `--dist` and `--mean` strings.
ModelSpec parse_spec(const RunConfig& config);

/// Default parameters per model when simulating.
GarchParams simulation_params(const RunConfig& config);

void cmd_stats(const RunConfig& config);
void cmd_fit(const RunConfig& config);
void cmd_backtest(const RunConfig& config);
void cmd_simulate(const RunConfig& config);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace volcast::cli
