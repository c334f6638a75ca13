#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "volcast/volcast.hpp"

namespace testing {

inline volcast::PriceSeries prices_from_close(const std::vector<double>& close) {
    volcast::PriceSeries p;
    p.symbol = "TEST";
    volcast::Date d(2020, 1, 6);
    for (double c : close) {
        p.dates.push_back(d);
        p.open.push_back(c);
        p.high.push_back(c);
        p.low.push_back(c);
        p.close.push_back(c);
        p.adj_close.push_back(c);
        p.volume.push_back(1000.0);
        d = d.next_business_day();
    }
    return p;
}

inline volcast::ReturnSeries series_from(const std::vector<double>& values) {
    volcast::ReturnSeries s;
    volcast::Date d(2020, 1, 6);
    for (double v : values) {
        s.dates.push_back(d);
        s.values.push_back(v);
        d = d.next_business_day();
    }
    return s;
}

inline oracle::Density oracle_density(const volcast::ResidualDistribution& d) {
    if (auto* t = std::get_if<volcast::StudentT>(&d)) return {oracle::Dist::T, t->nu, 0.0};
    if (auto* s = std::get_if<volcast::SkewT>(&d)) return {oracle::Dist::SkewT, s->nu, s->lambda};
    return {};
}

inline oracle::Model oracle_model(volcast::VarianceModel v) {
    return v == volcast::VarianceModel::Garch11       ? oracle::Model::Garch
           : v == volcast::VarianceModel::GjrGarch111 ? oracle::Model::Gjr
                                                      : oracle::Model::Egarch;
}

/// Feasible parameters spread over the region seen in practice.
inline volcast::GarchParams random_params(const volcast::ModelSpec& spec, volcast::Rng& rng) {
    using volcast::VarianceModel;
    auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    volcast::GarchParams p;
    p.dist = spec.dist;
    p.mu = u(-0.1, 0.1);
    switch (spec.variance) {
        case VarianceModel::Garch11:
            p.omega = u(0.01, 0.5), p.alpha = u(0.0, 0.2), p.beta = u(0.3, 0.97 - p.alpha);
            break;
        case VarianceModel::GjrGarch111:
            p.omega = u(0.01, 0.5), p.alpha = u(0.0, 0.1), p.gamma = u(0.0, 0.15);
            p.beta = u(0.3, 0.97 - p.alpha - p.gamma / 2);
            break;
        case VarianceModel::Egarch111:
            p.omega = u(-0.1, 0.1), p.alpha = u(0.0, 0.25), p.gamma = u(-0.15, 0.15), p.beta = u(0.5, 0.98);
            break;
    }
    return p;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("volcast_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
