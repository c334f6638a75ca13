#include "volcast/garch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "volcast/error.hpp"

namespace volcast {

namespace {

constexpr double kNuLower = 2.01;
constexpr double kNuUpper = 100.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

enum class DistParams { None, Nu, NuLambda };

DistParams dist_params(const ResidualDistribution& d) {
    if (std::holds_alternative<StudentT>(d)) return DistParams::Nu;
    if (std::holds_alternative<SkewT>(d)) return DistParams::NuLambda;
    return DistParams::None;
}

double dist_nu(const ResidualDistribution& d) {
    if (auto* t = std::get_if<StudentT>(&d)) return t->nu;
    if (auto* s = std::get_if<SkewT>(&d)) return s->nu;
    return 0.0;
}

double dist_lambda(const ResidualDistribution& d) {
    if (auto* s = std::get_if<SkewT>(&d)) return s->lambda;
    return 0.0;
}

ResidualDistribution make_dist(DistParams kind, double nu, double lambda) {
    switch (kind) {
        case DistParams::Nu:
            return StudentT{nu};
        case DistParams::NuLambda:
            return SkewT{nu, lambda};
        case DistParams::None:
            break;
    }
    return Normal{};
}

bool has_gamma(VarianceModel v) { return v != VarianceModel::Garch11; }

// Maps an unconstrained vector onto the admissible parameter region. Order
// matches parameter_names().
GarchParams unpack(const ModelSpec& spec, std::span<const double> u) {
    GarchParams p;
    std::size_t i = 0;
    if (spec.mean == MeanModel::Constant) p.mu = u[i++];
    switch (spec.variance) {
        case VarianceModel::Garch11: {
            p.omega = std::exp(u[i++]);
            const double persistence = logistic(u[i++]);
            const double share = logistic(u[i++]);
            p.alpha = persistence * share;
            p.beta = persistence * (1.0 - share);
            break;
        }
        case VarianceModel::GjrGarch111: {
            p.omega = std::exp(u[i++]);
            const double persistence = logistic(u[i++]);
            const double ea = std::exp(u[i++]);
            const double eg = std::exp(u[i++]);
            const double total = ea + eg + 1.0;
            p.alpha = persistence * ea / total;
            p.gamma = 2.0 * persistence * eg / total;
            p.beta = persistence / total;
            break;
        }
        case VarianceModel::Egarch111:
            p.omega = u[i++];
            p.alpha = u[i++];
            p.gamma = u[i++];
            p.beta = std::tanh(u[i++]);
            break;
    }
    const auto kind = dist_params(spec.dist);
    double nu = 0.0, lambda = 0.0;
    if (kind != DistParams::None) nu = kNuLower + (kNuUpper - kNuLower) * logistic(u[i++]);
    if (kind == DistParams::NuLambda) lambda = std::tanh(u[i++]);
    p.dist = make_dist(kind, nu, lambda);
    return p;
}

std::vector<double> pack(const ModelSpec& spec, const GarchParams& p) {
    std::vector<double> u;
    if (spec.mean == MeanModel::Constant) u.push_back(p.mu);
    switch (spec.variance) {
        case VarianceModel::Garch11: {
            const double persistence = p.alpha + p.beta;
            u.push_back(std::log(p.omega));
            u.push_back(logit(persistence));
            u.push_back(logit(p.alpha / persistence));
            break;
        }
        case VarianceModel::GjrGarch111: {
            const double persistence = p.alpha + p.beta + 0.5 * p.gamma;
            u.push_back(std::log(p.omega));
            u.push_back(logit(persistence));
            u.push_back(std::log(p.alpha / p.beta));
            u.push_back(std::log(0.5 * p.gamma / p.beta));
            break;
        }
        case VarianceModel::Egarch111:
            u.push_back(p.omega);
            u.push_back(p.alpha);
            u.push_back(p.gamma);
            u.push_back(std::atanh(p.beta));
            break;
    }
    const auto kind = dist_params(spec.dist);
    if (kind != DistParams::None) {
        u.push_back(logit((dist_nu(p.dist) - kNuLower) / (kNuUpper - kNuLower)));
    }
    if (kind == DistParams::NuLambda) u.push_back(std::atanh(dist_lambda(p.dist)));
    return u;
}

// Variance path without admissibility checks; only non-finite or non-positive
// variances are rejected. Used by the optimizer and the Hessian.
std::vector<double> filter_unchecked(const ModelSpec& spec, const GarchParams& params,
                                     std::span<const double> residuals, double init_var) {
    const VarianceRecursion rec(spec, params);
    std::vector<double> var(residuals.size());
    double v = init_var;
    for (std::size_t t = 0; t < residuals.size(); ++t) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw NumericError(t, "conditional variance not finite and positive");
        }
        var[t] = v;
        v = rec.next(residuals[t], v);
    }
    return var;
}

double loglik_unchecked(const ModelSpec& spec, const GarchParams& params, std::span<const double> data) {
    const auto eps = mean_residuals(spec, params, data);
    const auto var = filter_unchecked(spec, params, eps, initial_variance(eps));
    const StandardizedDensity density(params.dist);
    double ll = 0.0;
    for (std::size_t t = 0; t < eps.size(); ++t) {
        ll += density.log_pdf(eps[t] / std::sqrt(var[t])) - 0.5 * std::log(var[t]);
    }
    if (!std::isfinite(ll)) {
        throw NumericError(eps.size(), "log-likelihood not finite");
    }
    return ll;
}

GarchParams starting_values(const ModelSpec& spec, std::span<const double> data) {
    GarchParams p;
    if (spec.mean == MeanModel::Constant) {
        p.mu = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
    }
    const double var = initial_variance(mean_residuals(spec, p, data));
    switch (spec.variance) {
        case VarianceModel::Garch11:
            p.omega = 0.1 * var;
            p.alpha = 0.05;
            p.beta = 0.90;
            break;
        case VarianceModel::GjrGarch111:
            // gamma = 0 lies on the edge of the transformed region.
            p.omega = 0.1 * var;
            p.alpha = 0.05;
            p.gamma = 0.02;
            p.beta = 0.90;
            break;
        case VarianceModel::Egarch111:
            p.alpha = 0.05;
            p.gamma = 0.0;
            p.beta = 0.90;
            p.omega = (1.0 - p.beta) * std::log(var);
            break;
    }
    const auto kind = dist_params(spec.dist);
    const double nu = kind == DistParams::None ? 0.0 : std::clamp(dist_nu(spec.dist), 2.5, 99.0);
    const double lambda = std::clamp(dist_lambda(spec.dist), -0.9, 0.9);
    p.dist = make_dist(kind, nu, lambda);
    return p;
}

}  // namespace

std::string to_string(MeanModel m) { return m == MeanModel::Constant ? "constant" : "zero"; }

std::string to_string(VarianceModel v) {
    switch (v) {
        case VarianceModel::Garch11:
            return "garch";
        case VarianceModel::GjrGarch111:
            return "gjr";
        case VarianceModel::Egarch111:
            return "egarch";
    }
    return "unknown";
}

std::string describe(const ModelSpec& spec) {
    return to_string(spec.mean) + "-mean " + to_string(spec.variance) + " (" + distribution_name(spec.dist) + ")";
}

void validate(const ModelSpec& spec, const GarchParams& p) {
    if (spec.dist.index() != p.dist.index()) {
        throw ValidationError("distribution family differs from the model spec");
    }
    validate(p.dist);
    for (double v : {p.mu, p.omega, p.alpha, p.beta, p.gamma}) {
        if (!std::isfinite(v)) throw ValidationError("non-finite parameter");
    }
    switch (spec.variance) {
        case VarianceModel::Garch11:
            if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0) {
                throw ValidationError("GARCH requires omega > 0, alpha >= 0, beta >= 0");
            }
            if (!(p.alpha + p.beta < 1.0)) {
                throw ValidationError("GARCH requires alpha + beta < 1");
            }
            break;
        case VarianceModel::GjrGarch111:
            if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0 || p.alpha + p.gamma < 0.0) {
                throw ValidationError("GJR-GARCH requires omega > 0, alpha >= 0, beta >= 0, alpha + gamma >= 0");
            }
            if (!(p.alpha + p.beta + 0.5 * p.gamma < 1.0)) {
                throw ValidationError("GJR-GARCH requires alpha + beta + gamma/2 < 1");
            }
            break;
        case VarianceModel::Egarch111:
            if (!(std::abs(p.beta) < 1.0)) {
                throw ValidationError("EGARCH requires |beta| < 1");
            }
            break;
    }
}

std::vector<std::string> parameter_names(const ModelSpec& spec) {
    std::vector<std::string> names;
    if (spec.mean == MeanModel::Constant) names.emplace_back("mu");
    names.emplace_back("omega");
    names.emplace_back("alpha");
    if (has_gamma(spec.variance)) names.emplace_back("gamma");
    names.emplace_back("beta");
    const auto kind = dist_params(spec.dist);
    if (kind != DistParams::None) names.emplace_back("nu");
    if (kind == DistParams::NuLambda) names.emplace_back("lambda");
    return names;
}

int parameter_count(const ModelSpec& spec) { return static_cast<int>(parameter_names(spec).size()); }

std::vector<double> to_vector(const ModelSpec& spec, const GarchParams& p) {
    std::vector<double> v;
    if (spec.mean == MeanModel::Constant) v.push_back(p.mu);
    v.push_back(p.omega);
    v.push_back(p.alpha);
    if (has_gamma(spec.variance)) v.push_back(p.gamma);
    v.push_back(p.beta);
    const auto kind = dist_params(spec.dist);
    if (kind != DistParams::None) v.push_back(dist_nu(p.dist));
    if (kind == DistParams::NuLambda) v.push_back(dist_lambda(p.dist));
    return v;
}

GarchParams from_vector(const ModelSpec& spec, std::span<const double> v) {
    if (static_cast<int>(v.size()) != parameter_count(spec)) {
        throw std::invalid_argument("parameter vector length does not match the model spec");
    }
    GarchParams p;
    std::size_t i = 0;
    if (spec.mean == MeanModel::Constant) p.mu = v[i++];
    p.omega = v[i++];
    p.alpha = v[i++];
    if (has_gamma(spec.variance)) p.gamma = v[i++];
    p.beta = v[i++];
    const auto kind = dist_params(spec.dist);
    double nu = 0.0, lambda = 0.0;
    if (kind != DistParams::None) nu = v[i++];
    if (kind == DistParams::NuLambda) lambda = v[i++];
    p.dist = make_dist(kind, nu, lambda);
    return p;
}

VarianceRecursion::VarianceRecursion(const ModelSpec& spec, const GarchParams& params)
    : model_(spec.variance),
      omega_(params.omega),
      alpha_(params.alpha),
      beta_(params.beta),
      gamma_(has_gamma(spec.variance) ? params.gamma : 0.0) {
    if (model_ == VarianceModel::Egarch111) abs_mean_ = abs_moment(params.dist);
}

double VarianceRecursion::next(double residual, double variance) const {
    switch (model_) {
        case VarianceModel::Garch11:
            return omega_ + alpha_ * residual * residual + beta_ * variance;
        case VarianceModel::GjrGarch111: {
            const double e2 = residual * residual;
            const double asym = residual < 0.0 ? gamma_ * e2 : 0.0;
            return omega_ + alpha_ * e2 + asym + beta_ * variance;
        }
        case VarianceModel::Egarch111: {
            const double z = residual / std::sqrt(variance);
            return std::exp(omega_ + alpha_ * (std::abs(z) - abs_mean_) + gamma_ * z + beta_ * std::log(variance));
        }
    }
    return kNaN;
}

std::vector<double> mean_residuals(const ModelSpec& spec, const GarchParams& params, std::span<const double> data) {
    std::vector<double> eps(data.begin(), data.end());
    if (spec.mean == MeanModel::Constant) {
        for (auto& e : eps) e -= params.mu;
    }
    return eps;
}

double initial_variance(std::span<const double> residuals) {
    if (residuals.empty()) {
        throw InsufficientDataError("initial variance of an empty series");
    }
    double ss = 0.0;
    for (double e : residuals) ss += e * e;
    return ss / static_cast<double>(residuals.size());
}

std::vector<double> variance_filter(const ModelSpec& spec, const GarchParams& params,
                                    std::span<const double> residuals, double init_var) {
    if (residuals.empty()) {
        throw InsufficientDataError("variance filter needs at least one residual");
    }
    if (!(init_var > 0.0) || !std::isfinite(init_var)) {
        throw std::invalid_argument("initial variance must be finite and positive");
    }
    validate(spec, params);
    return filter_unchecked(spec, params, residuals, init_var);
}

double log_likelihood(const ModelSpec& spec, const GarchParams& params, std::span<const double> data) {
    if (data.size() < 10) {
        throw InsufficientDataError("log-likelihood needs at least 10 observations");
    }
    validate(spec, params);
    return loglik_unchecked(spec, params, data);
}

double long_run_variance(const ModelSpec& spec, const GarchParams& p) {
    validate(spec, p);
    switch (spec.variance) {
        case VarianceModel::Garch11:
            return p.omega / (1.0 - p.alpha - p.beta);
        case VarianceModel::GjrGarch111: {
            const double persistence = p.alpha + p.gamma * prob_negative(p.dist) + p.beta;
            if (!(persistence < 1.0)) return std::numeric_limits<double>::infinity();
            return p.omega / (1.0 - persistence);
        }
        case VarianceModel::Egarch111:
            return std::exp(p.omega / (1.0 - p.beta));
    }
    return kNaN;
}

double FitResult::next_variance() const {
    const auto var = variance_filter(spec, params, residuals, init_var);
    return VarianceRecursion(spec, params).next(residuals.back(), var.back());
}

FitResult fit(const ModelSpec& spec, std::span<const double> data, const FitOptions& options) {
    validate(spec.dist);
    if (data.size() < std::max<std::size_t>(options.min_obs, 10)) {
        throw InsufficientDataError(describe(spec) + " fit needs at least " +
                                    std::to_string(std::max<std::size_t>(options.min_obs, 10)) +
                                    " observations, got " + std::to_string(data.size()));
    }
    const double n = static_cast<double>(data.size());

    const optim::Objective objective = [&](std::span<const double> u) {
        try {
            return -loglik_unchecked(spec, unpack(spec, u), data) / n;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    const auto start = pack(spec, starting_values(spec, data));
    const auto opt = optim::minimize(objective, start, options.optimizer);
    const GarchParams best = unpack(spec, opt.x);
    if (!std::isfinite(opt.value)) {
        throw EstimationError(describe(spec) + ": no finite likelihood found");
    }
    if (!opt.converged) {
        throw ConvergenceError(describe(spec) + ": no convergence after " + std::to_string(opt.iterations) +
                                   " iterations",
                               to_vector(spec, best), -opt.value * n);
    }

    FitResult r;
    r.spec = spec;
    r.params = best;
    r.n_obs = data.size();
    r.iterations = opt.iterations;
    r.func_evals = opt.func_evals;
    r.grad_evals = opt.grad_evals;
    r.residuals = mean_residuals(spec, best, data);
    r.init_var = initial_variance(r.residuals);
    const auto var = variance_filter(spec, best, r.residuals, r.init_var);
    r.cond_vol.resize(var.size());
    r.std_residuals.resize(var.size());
    for (std::size_t t = 0; t < var.size(); ++t) {
        r.cond_vol[t] = std::sqrt(var[t]);
        r.std_residuals[t] = r.residuals[t] / r.cond_vol[t];
    }
    r.loglik = log_likelihood(spec, best, data);
    const int k = parameter_count(spec);
    r.aic = 2.0 * k - 2.0 * r.loglik;
    r.bic = k * std::log(n) - 2.0 * r.loglik;

    // Inference from the observed information in the natural parameterization.
    const auto theta = to_vector(spec, best);
    std::vector<double> steps(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) steps[i] = 1e-4 * std::max(std::abs(theta[i]), 1e-2);
    const optim::Objective negll = [&](std::span<const double> th) {
        try {
            const auto p = from_vector(spec, th);
            validate(p.dist);
            return -loglik_unchecked(spec, p, data);
        } catch (const Error&) {
            return kNaN;
        }
    };
    const Eigen::MatrixXd hessian = optim::numerical_hessian(negll, theta, steps);
    Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    r.inference_available = hessian.allFinite() && llt.info() == Eigen::Success;
    Eigen::MatrixXd cov;
    if (r.inference_available) {
        cov = llt.solve(Eigen::MatrixXd::Identity(hessian.rows(), hessian.cols()));
        r.inference_available = cov.allFinite() && (cov.diagonal().array() > 0.0).all();
    }
    if (!r.inference_available) {
        r.warnings.emplace_back("Hessian not positive definite at the optimum; standard errors unavailable");
    }
    const auto names = parameter_names(spec);
    for (std::size_t i = 0; i < names.size(); ++i) {
        ParameterEstimate e{names[i], theta[i], kNaN, kNaN, kNaN};
        if (r.inference_available) {
            e.std_error = std::sqrt(cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
            e.tstat = e.coef / e.std_error;
            e.pvalue = std::erfc(std::abs(e.tstat) / std::sqrt(2.0));
        }
        r.estimates.push_back(std::move(e));
    }
    if (dist_params(spec.dist) != DistParams::None && dist_nu(best.dist) > 99.0) {
        r.warnings.emplace_back("nu at its upper bound; innovations effectively normal");
    }
    return r;
}

FitResult fit_on_arma_residuals(const ArmaFit& arma, const ModelSpec& spec, const FitOptions& options) {
    if (spec.mean != MeanModel::Zero) {
        throw std::invalid_argument("GARCH on ARMA residuals requires a zero-mean spec");
    }
    if (arma.residuals.empty()) {
        throw InsufficientDataError("ARMA fit has no residuals");
    }
    return fit(spec, arma.residuals, options);
}

nlohmann::ordered_json to_json(const FitResult& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["model"] = {{"mean", to_string(r.spec.mean)},
                  {"variance", to_string(r.spec.variance)},
                  {"dist", distribution_name(r.spec.dist)}};
    auto num = [](double v) -> ordered_json { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    ordered_json params = ordered_json::object();
    for (const auto& e : r.estimates) {
        params[e.name] = {{"coef", e.coef}, {"stderr", num(e.std_error)}, {"tstat", num(e.tstat)},
                          {"pvalue", num(e.pvalue)}};
    }
    j["params"] = std::move(params);
    j["loglik"] = r.loglik;
    j["aic"] = r.aic;
    j["bic"] = r.bic;
    j["iterations"] = r.iterations;
    j["func_evals"] = r.func_evals;
    j["grad_evals"] = r.grad_evals;
    j["n_obs"] = r.n_obs;
    j["inference_available"] = r.inference_available;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace volcast
