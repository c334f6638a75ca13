#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace volcast::optim {

/// Objective to minimize. May return +inf (or NaN) for infeasible points.
using Objective = std::function<double(std::span<const double>)>;

struct Options {
    // Simplex phase: stop when the spread of vertex values falls below this.
    double simplex_tol = 1e-5;
    int simplex_max_iter = 2000;
    double simplex_step = 0.25;
    // Quasi-Newton phase: relative objective improvement threshold and cap.
    double rel_tol = 1e-8;
    int max_iter = 500;
    double fd_step = 1e-6;
};

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int func_evals = 0;
    int grad_evals = 0;
    bool converged = false;
};

Result nelder_mead(const Objective& f, std::vector<double> x0, double step, double tol, int max_iter);

/// BFGS on the inverse-Hessian approximation with central-difference gradients
/// and a backtracking line search. Converged once the relative improvement
/// stays below `rel_tol` for two consecutive iterations, or no descent step exists.
/// `hinv0` seeds the inverse-Hessian approximation; identity when null.
Result bfgs(const Objective& f, std::vector<double> x0, const Options& options,
            const Eigen::MatrixXd* hinv0 = nullptr);

/// Simplex to a loose tolerance, then BFGS polish, restarted from a numerical
/// Hessian while restarts keep paying off. Counters accumulate across phases.
Result minimize(const Objective& f, std::vector<double> x0, const Options& options = {});

/// Central differences with step h * max(1, |x_i|). Adds 2 * dim evaluations to `evals`.
std::vector<double> central_gradient(const Objective& f, std::span<const double> x, double h,
                                     int* evals = nullptr);

/// Central-difference Hessian with per-coordinate steps.
Eigen::MatrixXd numerical_hessian(const Objective& f, std::span<const double> x,
                                  std::span<const double> steps);

}  // namespace volcast::optim
