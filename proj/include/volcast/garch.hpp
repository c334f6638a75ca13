#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volcast/arma.hpp"
#include "volcast/distributions.hpp"
#include "volcast/optimize.hpp"

namespace volcast {

enum class MeanModel { Constant, Zero };
enum class VarianceModel { Garch11, GjrGarch111, Egarch111 };

struct ModelSpec {
    MeanModel mean = MeanModel::Constant;
    VarianceModel variance = VarianceModel::Garch11;
    /// Selects the innovation family. Its parameter values are starting points for fitting.
    ResidualDistribution dist = Normal{};
};

std::string to_string(MeanModel m);
std::string to_string(VarianceModel v);
std::string describe(const ModelSpec& spec);

/// Parameters of the conditional mean and variance equations.
///
/// GARCH(1,1):   s2_t = omega + alpha e_{t-1}^2 + beta s2_{t-1}
/// GJR(1,1,1):   s2_t = omega + (alpha + gamma 1[e_{t-1} < 0]) e_{t-1}^2 + beta s2_{t-1}
/// EGARCH(1,1,1): ln s2_t = omega + alpha (|z_{t-1}| - E|z|) + gamma z_{t-1} + beta ln s2_{t-1}
///
/// `mu` is ignored for a zero-mean spec, `gamma` for GARCH(1,1).
struct GarchParams {
    double mu = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    ResidualDistribution dist = Normal{};
};

/// Throws ValidationError when params fall outside the admissible region of the model,
/// or the distribution family differs from `spec.dist`.
void validate(const ModelSpec& spec, const GarchParams& params);

/// Names of the estimated parameters, in the order used by `to_vector`:
/// mu, omega, alpha, gamma, beta, nu, lambda (each only when present).
std::vector<std::string> parameter_names(const ModelSpec& spec);
std::vector<double> to_vector(const ModelSpec& spec, const GarchParams& params);
GarchParams from_vector(const ModelSpec& spec, std::span<const double> values);
int parameter_count(const ModelSpec& spec);

/// One step of the variance recursion with E|Z| precomputed.
class VarianceRecursion {
public:
    VarianceRecursion(const ModelSpec& spec, const GarchParams& params);

    /// Conditional variance at t+1 given the residual and variance at t.
    double next(double residual, double variance) const;

private:
    VarianceModel model_;
    double omega_, alpha_, beta_, gamma_;
    double abs_mean_ = 0.0;
};

/// e_t = r_t - mu (mu = 0 for a zero-mean spec).
std::vector<double> mean_residuals(const ModelSpec& spec, const GarchParams& params,
                                   std::span<const double> data);

/// Recursion start value: mean of squared residuals.
double initial_variance(std::span<const double> residuals);

/// Conditional variances s2_1..s2_n with s2_1 = init_var.
std::vector<double> variance_filter(const ModelSpec& spec, const GarchParams& params,
                                    std::span<const double> residuals, double init_var);

/// sum_t [ log f(e_t / s_t) - 0.5 ln s2_t ], with the filter started at `initial_variance`.
double log_likelihood(const ModelSpec& spec, const GarchParams& params, std::span<const double> data);

/// omega / (1 - alpha - beta) for GARCH; omega / (1 - alpha - gamma P(Z<0) - beta) for GJR;
/// exp(omega / (1 - beta)), the log-variance fixed point, for EGARCH.
double long_run_variance(const ModelSpec& spec, const GarchParams& params);

struct FitOptions {
    std::size_t min_obs = 250;
    optim::Options optimizer{};
};

struct ParameterEstimate {
    std::string name;
    double coef = 0.0;
    double std_error = 0.0;
    double tstat = 0.0;
    double pvalue = 0.0;
};

struct FitResult {
    ModelSpec spec;
    GarchParams params;
    std::vector<ParameterEstimate> estimates;
    /// False when the Hessian at the optimum is not positive definite; std_error,
    /// tstat and pvalue are then NaN.
    bool inference_available = false;
    std::vector<std::string> warnings;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::vector<double> residuals;
    std::vector<double> cond_vol;
    std::vector<double> std_residuals;
    double init_var = 0.0;
    int iterations = 0;
    int func_evals = 0;
    int grad_evals = 0;
    std::size_t n_obs = 0;

    /// Variance forecast for the step after the sample.
    double next_variance() const;
};

/// Maximum likelihood over the admissible region. Throws ConvergenceError when the
/// iteration cap is hit.
FitResult fit(const ModelSpec& spec, std::span<const double> data, const FitOptions& options = {});

/// Zero-mean fit on the residual series of an ARMA model.
FitResult fit_on_arma_residuals(const ArmaFit& arma, const ModelSpec& spec, const FitOptions& options = {});

nlohmann::ordered_json to_json(const FitResult& result);

}  // namespace volcast
