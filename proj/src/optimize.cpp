#include "volcast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volcast::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval(const Objective& f, std::span<const double> x, int& counter) {
    ++counter;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

Result nelder_mead(const Objective& f, std::vector<double> x0, double step, double tol, int max_iter) {
    const std::size_t n = x0.size();
    Result res;
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) values[i] = eval(f, simplex[i], res.func_evals);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point = [&](double coef, const std::vector<double>& worst, std::vector<double>& out) {
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (worst[j] - centroid[j]);
    };

    for (; res.iterations < max_iter; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
        if (std::isfinite(values[worst]) &&
            std::abs(values[worst] - values[best]) <= tol * (std::abs(values[best]) + tol)) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
        }

        point(-1.0, simplex[worst], trial);
        const double fr = eval(f, trial, res.func_evals);
        if (fr < values[best]) {
            point(-2.0, simplex[worst], trial2);
            const double fe = eval(f, trial2, res.func_evals);
            if (fe < fr) {
                simplex[worst] = trial2;
                values[worst] = fe;
            } else {
                simplex[worst] = trial;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = trial;
            values[worst] = fr;
            continue;
        }
        // Contraction: outside if the reflection helped at all, inside otherwise.
        const bool outside = fr < values[worst];
        point(outside ? -0.5 : 0.5, simplex[worst], trial2);
        const double fc = eval(f, trial2, res.func_evals);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = eval(f, simplex[i], res.func_evals);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    res.x = simplex[best];
    res.value = values[best];
    return res;
}

std::vector<double> central_gradient(const Objective& f, std::span<const double> x, double h, int* evals) {
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> g(x.size());
    int local = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        const double fp = eval(f, xp, local);
        xp[i] = x[i] - step;
        const double fm = eval(f, xp, local);
        xp[i] = x[i];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[i] = (fp - fm) / (2.0 * step);
        } else {
            // One-sided fallback at the edge of the feasible region.
            const double f0 = eval(f, x, local);
            g[i] = std::isfinite(fp) ? (fp - f0) / step : std::isfinite(fm) ? (f0 - fm) / step : 0.0;
        }
    }
    if (evals) *evals += local;
    return g;
}

Result bfgs(const Objective& f, std::vector<double> x0, const Options& options, const Eigen::MatrixXd* hinv0) {
    const std::size_t n = x0.size();
    Result res;
    std::vector<double> x = std::move(x0);
    double fx = eval(f, x, res.func_evals);
    std::vector<double> g = central_gradient(f, x, options.fd_step, &res.func_evals);
    ++res.grad_evals;
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    bool first = true;
    if (hinv0) {
        hinv = *hinv0;
        first = false;
    }
    int small_steps = 0;

    std::vector<double> d(n), xn(n), s(n), y(n);
    while (res.iterations < options.max_iter) {
        ++res.iterations;
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v -= hinv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * g[j];
            d[i] = v;
        }
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            slope = dot(g, d);
            if (!(slope < 0.0)) {
                res.converged = true;
                break;
            }
        }
        const double norm = std::sqrt(dot(d, d));
        const double max_step = first ? 1.0 : 10.0;
        if (norm > max_step) {
            for (auto& v : d) v *= max_step / norm;
            slope *= max_step / norm;
        }

        double t = 1.0;
        double fn = kInf;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
            fn = eval(f, xn, res.func_evals);
            if (fn <= fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            res.converged = true;
            break;
        }

        const auto gn = central_gradient(f, xn, options.fd_step, &res.func_evals);
        ++res.grad_evals;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12) {
            if (first) hinv *= sy / dot(y, y);
            Eigen::Map<const Eigen::VectorXd> sv(s.data(), static_cast<Eigen::Index>(n));
            Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n));
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = hinv * yv;
            hinv += rho * rho * (sy + yv.dot(hy)) * (sv * sv.transpose()) -
                    rho * (hy * sv.transpose() + sv * hy.transpose());
            first = false;
        }

        const double improvement = (fx - fn) / std::max(std::abs(fx), 1.0);
        x = xn;
        fx = fn;
        g = gn;
        // Predicted remaining decrease under the quadratic model.
        Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(n));
        const double decrement = 0.5 * gv.dot(hinv * gv) / std::max(std::abs(fx), 1.0);
        small_steps = improvement < options.rel_tol && decrement < options.rel_tol ? small_steps + 1 : 0;
        if (small_steps >= 2) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    res.value = fx;
    return res;
}

Result minimize(const Objective& f, std::vector<double> x0, const Options& options) {
    const auto simplex = nelder_mead(f, std::move(x0), options.simplex_step, options.simplex_tol,
                                     options.simplex_max_iter);
    auto polished = bfgs(f, simplex.x, options);
    polished.func_evals += simplex.func_evals;
    polished.iterations += simplex.iterations;
    // Restart from a fresh curvature estimate: the secant approximation can
    // stay stiff along directions the first run barely explored.
    for (int round = 0; round < 6 && std::isfinite(polished.value); ++round) {
        std::vector<double> steps(polished.x.size());
        for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = 1e-4 * std::max(1.0, std::abs(polished.x[i]));
        const Eigen::MatrixXd h = numerical_hessian(f, polished.x, steps);
        polished.func_evals += static_cast<int>(2 * steps.size() * steps.size() + 1);
        if (!h.allFinite()) break;
        Eigen::LLT<Eigen::MatrixXd> llt(h);
        if (llt.info() != Eigen::Success) break;
        const Eigen::MatrixXd hinv = llt.solve(Eigen::MatrixXd::Identity(h.rows(), h.cols()));
        auto next = bfgs(f, polished.x, options, &hinv);
        const double gain = (polished.value - next.value) / std::max(std::abs(polished.value), 1.0);
        next.func_evals += polished.func_evals;
        next.iterations += polished.iterations;
        next.grad_evals += polished.grad_evals;
        if (!(next.value < polished.value)) break;
        polished = std::move(next);
        if (gain < options.rel_tol) break;
    }
    if (simplex.value < polished.value) {
        polished.x = simplex.x;
        polished.value = simplex.value;
    }
    return polished;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, std::span<const double> x,
                                  std::span<const double> steps) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd h(n, n);
    std::vector<double> xp(x.begin(), x.end());
    const double f0 = f(x);
    auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
        xp[i] += di;
        xp[j] += dj;
        const double v = f(xp);
        xp[i] = x[i];
        xp[j] = x[j];
        return v;
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double hi = steps[i];
        const double fp = at(i, hi, i, 0.0);
        const double fm = at(i, -hi, i, 0.0);
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (hi * hi);
        for (std::size_t j = 0; j < i; ++j) {
            const double hj = steps[j];
            const double v = (at(i, hi, j, hj) - at(i, hi, j, -hj) - at(i, -hi, j, hj) + at(i, -hi, j, -hj)) /
                             (4.0 * hi * hj);
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return h;
}

}  // namespace volcast::optim
