#include "volcast/arma.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "volcast/error.hpp"
#include "volcast/optimize.hpp"

namespace volcast {

namespace {

// Maps unconstrained values to the coefficients of a stationary AR polynomial
// via partial autocorrelations in (-1, 1).
std::vector<double> coeffs_from_unconstrained(std::span<const double> u) {
    const std::size_t k = u.size();
    std::vector<double> phi(k, 0.0), prev(k, 0.0);
    for (std::size_t m = 0; m < k; ++m) {
        const double r = std::tanh(u[m]);
        phi[m] = r;
        for (std::size_t j = 0; j < m; ++j) phi[j] = prev[j] - r * prev[m - 1 - j];
        prev = phi;
    }
    return phi;
}

struct Layout {
    ArmaOrder order;
    std::size_t size() const {
        return static_cast<std::size_t>(order.p + order.q) + (order.intercept ? 1 : 0);
    }
};

struct Coefficients {
    double mu = 0.0;
    std::vector<double> ar, ma;
};

Coefficients unpack(const Layout& layout, std::span<const double> x) {
    Coefficients c;
    std::size_t i = 0;
    if (layout.order.intercept) c.mu = x[i++];
    c.ar = coeffs_from_unconstrained(x.subspan(i, static_cast<std::size_t>(layout.order.p)));
    i += static_cast<std::size_t>(layout.order.p);
    auto psi = coeffs_from_unconstrained(x.subspan(i, static_cast<std::size_t>(layout.order.q)));
    c.ma.resize(psi.size());
    std::transform(psi.begin(), psi.end(), c.ma.begin(), [](double v) { return -v; });
    return c;
}

void css_residuals(std::span<const double> x, const Coefficients& c, std::vector<double>& e) {
    const std::size_t n = x.size();
    e.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double v = x[t] - c.mu;
        for (std::size_t i = 0; i < c.ar.size() && i < t; ++i) v -= c.ar[i] * (x[t - 1 - i] - c.mu);
        for (std::size_t j = 0; j < c.ma.size() && j < t; ++j) v -= c.ma[j] * e[t - 1 - j];
        e[t] = v;
    }
}

void finish(ArmaFit& fit) {
    const double n = static_cast<double>(fit.n);
    double ss = 0.0;
    for (double e : fit.residuals) ss += e * e;
    fit.sigma2 = ss / n;
    if (!(fit.sigma2 > 0.0)) {
        throw DegenerateSeriesError("ARMA residuals have zero variance");
    }
    fit.loglik = -0.5 * n * (std::log(2.0 * std::numbers::pi * fit.sigma2) + 1.0);
    fit.k = fit.order.p + fit.order.q + (fit.order.intercept ? 1 : 0) + 1;
    fit.aic = 2.0 * fit.k - 2.0 * fit.loglik;
    fit.bic = fit.k * std::log(n) - 2.0 * fit.loglik;
}

bool preferred(const ArmaFit& a, const ArmaFit& b) {
    if (a.bic != b.bic) return a.bic < b.bic;
    const auto key = [](const ArmaOrder& o) { return std::make_tuple(o.p + o.q, o.q, o.intercept, o.p); };
    return key(a.order) < key(b.order);
}

}  // namespace

std::string to_string(const ArmaOrder& order) {
    return "(" + std::to_string(order.p) + "," + std::to_string(order.d) + "," + std::to_string(order.q) +
           ")" + (order.intercept ? " intercept" : " no intercept");
}

double max_inverse_root(std::span<const double> coeffs) {
    if (coeffs.empty()) return 0.0;
    const auto k = static_cast<Eigen::Index>(coeffs.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) companion(0, j) = coeffs[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ArmaFit fit_arma(std::span<const double> values, const ArmaOrder& order) {
    if (order.p < 0 || order.q < 0 || order.d != 0) {
        throw std::invalid_argument("ARMA order must have p, q >= 0 and d = 0");
    }
    const std::size_t needed = 10 * static_cast<std::size_t>(order.p + order.q + 1);
    if (values.size() <= needed) {
        throw InsufficientDataError("ARMA" + to_string(order) + " needs more than " +
                                    std::to_string(needed) + " observations");
    }

    ArmaFit fit;
    fit.order = order;
    fit.n = values.size();

    if (order.p == 0 && order.q == 0) {
        if (order.intercept) {
            fit.intercept_value =
                std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
            fit.residuals.resize(values.size());
            std::transform(values.begin(), values.end(), fit.residuals.begin(),
                           [mu = fit.intercept_value](double v) { return v - mu; });
        } else {
            fit.residuals.assign(values.begin(), values.end());
        }
        finish(fit);
        return fit;
    }

    const Layout layout{order};
    std::vector<double> x0(layout.size(), 0.0);
    if (order.intercept) {
        x0[0] = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    std::vector<double> scratch;
    const double n = static_cast<double>(values.size());
    optim::Objective objective = [&](std::span<const double> x) {
        css_residuals(values, unpack(layout, x), scratch);
        double ss = 0.0;
        for (double e : scratch) ss += e * e;
        return ss / n;
    };
    optim::Options options;
    options.simplex_step = 0.2;
    options.simplex_tol = 1e-8;
    options.rel_tol = 1e-12;
    const auto result = optim::minimize(objective, x0, options);
    if (!std::isfinite(result.value)) {
        throw EstimationError("ARMA" + to_string(order) + ": objective not finite at optimum");
    }

    const auto c = unpack(layout, result.x);
    if (max_inverse_root(c.ar) >= 1.0 - 1e-7) {
        throw EstimationError("ARMA" + to_string(order) + ": non-stationary optimum");
    }
    std::vector<double> neg_ma(c.ma.size());
    std::transform(c.ma.begin(), c.ma.end(), neg_ma.begin(), [](double v) { return -v; });
    if (max_inverse_root(neg_ma) >= 1.0 - 1e-7) {
        throw EstimationError("ARMA" + to_string(order) + ": non-invertible optimum");
    }
    fit.intercept_value = c.mu;
    fit.ar = c.ar;
    fit.ma = c.ma;
    css_residuals(values, c, fit.residuals);
    finish(fit);
    return fit;
}

ArmaFit select_arma(std::span<const double> values, const ArmaSelectOptions& options) {
    std::vector<ArmaCandidate> log;
    std::map<std::tuple<int, int, bool>, std::optional<ArmaFit>> tried;
    std::optional<ArmaFit> best;

    auto evaluate = [&](const ArmaOrder& o) -> const std::optional<ArmaFit>& {
        const auto key = std::make_tuple(o.p, o.q, o.intercept);
        if (auto it = tried.find(key); it != tried.end()) return it->second;
        ArmaCandidate cand{o, false, 0.0, {}};
        std::optional<ArmaFit> result;
        if (log.size() < options.max_candidates) {
            try {
                result = fit_arma(values, o);
                cand.ok = true;
                cand.bic = result->bic;
            } catch (const Error& e) {
                cand.error = e.what();
            }
            log.push_back(cand);
        }
        return tried.emplace(key, std::move(result)).first->second;
    };
    auto consider = [&](const std::optional<ArmaFit>& f) {
        if (f && (!best || preferred(*f, *best))) {
            best = f;
            return true;
        }
        return false;
    };

    for (const auto& start : {ArmaOrder{0, 0, 0, false}, ArmaOrder{0, 0, 0, true}, ArmaOrder{1, 0, 1, false},
                              ArmaOrder{1, 0, 1, true}}) {
        if (start.p <= options.max_p && start.q <= options.max_q) consider(evaluate(start));
    }
    if (!best) {
        throw EstimationError("ARMA order selection: every starting candidate failed");
    }

    for (;;) {
        const ArmaOrder cur = best->order;
        bool moved = false;
        std::vector<ArmaOrder> neighbors;
        for (int dp = -1; dp <= 1; ++dp) {
            for (int dq = -1; dq <= 1; ++dq) {
                if (dp == 0 && dq == 0) continue;
                const int p = cur.p + dp, q = cur.q + dq;
                if (p < 0 || q < 0 || p > options.max_p || q > options.max_q) continue;
                neighbors.push_back({p, 0, q, cur.intercept});
            }
        }
        neighbors.push_back({cur.p, 0, cur.q, !cur.intercept});
        for (const auto& o : neighbors) {
            if (values.size() <= 10 * static_cast<std::size_t>(o.p + o.q + 1)) continue;
            moved = consider(evaluate(o)) || moved;
        }
        if (!moved || log.size() >= options.max_candidates) break;
    }

    ArmaFit out = std::move(*best);
    out.candidates = std::move(log);
    out.candidates_evaluated = out.candidates.size();
    return out;
}

nlohmann::ordered_json to_json(const ArmaFit& fit) {
    nlohmann::ordered_json j;
    j["order"] = {{"p", fit.order.p}, {"d", fit.order.d}, {"q", fit.order.q}, {"intercept", fit.order.intercept}};
    j["ar"] = fit.ar;
    j["ma"] = fit.ma;
    j["intercept_value"] = fit.intercept_value;
    j["sigma2"] = fit.sigma2;
    j["loglik"] = fit.loglik;
    j["aic"] = fit.aic;
    j["bic"] = fit.bic;
    j["n"] = fit.n;
    j["k"] = fit.k;
    j["candidates_evaluated"] = fit.candidates_evaluated;
    auto& cands = j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : fit.candidates) {
        nlohmann::ordered_json cj{{"p", c.order.p}, {"q", c.order.q}, {"intercept", c.order.intercept}, {"ok", c.ok}};
        if (c.ok) cj["bic"] = c.bic;
        else cj["error"] = c.error;
        cands.push_back(std::move(cj));
    }
    return j;
}

}  // namespace volcast
