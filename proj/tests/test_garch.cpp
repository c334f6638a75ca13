#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "volcast/arma.hpp"
#include "volcast/descriptive.hpp"
#include "volcast/error.hpp"
#include "volcast/garch.hpp"
#include "volcast/optimize.hpp"
#include "volcast/simulate.hpp"

using namespace volcast;

namespace {

ModelSpec make_spec(VarianceModel v, ResidualDistribution d = Normal{}, MeanModel m = MeanModel::Constant) {
    return {m, v, d};
}

GarchParams garch(double omega, double alpha, double beta, double mu = 0.0) {
    GarchParams p;
    p.mu = mu;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

std::vector<double> fixture_returns(std::uint64_t seed, std::size_t n) {
    GarchParams p = garch(0.1, 0.1, 0.85, 0.03);
    return simulate_path(ModelSpec{}, p, n, 200, seed).returns.values;
}

}  // namespace

TEST_SUITE("garch") {

TEST_CASE("constant-variance degenerate filter") {
    std::vector<double> eps{0.3, -1.2, 2.0, 0.1, -0.4};
    auto v = variance_filter(make_spec(VarianceModel::Garch11), garch(0.04, 0.0, 0.0), eps, 1.7);
    CHECK(v[0] == 1.7);
    for (std::size_t t = 1; t < v.size(); ++t) CHECK(v[t] == 0.04);
}

TEST_CASE("hand recursion") {
    std::vector<double> eps{1.0, -2.0, 0.5};
    auto v = variance_filter(make_spec(VarianceModel::Garch11), garch(0.1, 0.1, 0.8), eps, 1.0);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v[2] == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("GJR with zero gamma matches GARCH") {
    auto eps = fixture_returns(1, 500);
    auto p = garch(0.1, 0.07, 0.9);
    auto a = variance_filter(make_spec(VarianceModel::Garch11), p, eps, 2.0);
    auto b = variance_filter(make_spec(VarianceModel::GjrGarch111), p, eps, 2.0);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(std::abs(a[t] - b[t]) <= 1e-14 * a[t]);
}

TEST_CASE("GJR loads negative shocks only") {
    auto spec = make_spec(VarianceModel::GjrGarch111);
    auto p = garch(0.1, 0.05, 0.8);
    p.gamma = 0.1;
    const VarianceRecursion rec(spec, p);
    CHECK(rec.next(-2.0, 1.0) == doctest::Approx(0.1 + 0.15 * 4.0 + 0.8));
    CHECK(rec.next(2.0, 1.0) == doctest::Approx(0.1 + 0.05 * 4.0 + 0.8));
}

TEST_CASE("EGARCH symmetry and leverage direction") {
    std::vector<double> pos{1.5, 0.8, 2.2, 0.3, 1.1}, neg(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) neg[i] = -pos[i];
    GarchParams p = garch(0.02, 0.12, 0.95);
    auto spec = make_spec(VarianceModel::Egarch111);
    auto vp = variance_filter(spec, p, pos, 1.0);
    auto vn = variance_filter(spec, p, neg, 1.0);
    CHECK(vp == vn);
    p.gamma = -0.06;
    vp = variance_filter(spec, p, pos, 1.0);
    vn = variance_filter(spec, p, neg, 1.0);
    for (std::size_t t = 1; t < vp.size(); ++t) CHECK(vn[t] > vp[t]);
}

TEST_CASE("non-finite filter state names the index") {
    std::vector<double> eps{1.0, 1e200, 1.0};
    try {
        variance_filter(make_spec(VarianceModel::Garch11), garch(0.1, 0.1, 0.8), eps, 1.0);
        FAIL("expected a numeric error");
    } catch (const NumericError& e) {
        CHECK(e.index() == 2);
    }
}

TEST_CASE("parameter validation") {
    auto g = make_spec(VarianceModel::Garch11);
    CHECK_THROWS_AS(validate(g, garch(0.1, 0.5, 0.5)), ValidationError);
    CHECK_THROWS_AS(validate(g, garch(0.0, 0.1, 0.5)), ValidationError);
    auto j = make_spec(VarianceModel::GjrGarch111);
    auto p = garch(0.1, 0.05, 0.9);
    p.gamma = 0.12;
    CHECK_THROWS_AS(validate(j, p), ValidationError);
    auto e = make_spec(VarianceModel::Egarch111);
    CHECK_NOTHROW(validate(e, garch(-0.3, 0.2, 0.99)));
    CHECK_THROWS_AS(validate(e, garch(0.0, 0.1, 1.0)), ValidationError);
    auto t = make_spec(VarianceModel::Garch11, StudentT{8});
    CHECK_THROWS_AS(validate(t, garch(0.1, 0.1, 0.8)), ValidationError);
}

TEST_CASE("degenerate model reduces to iid normal likelihood") {
    Rng rng(4);
    auto x = sample(Normal{}, rng, 400);
    auto spec = make_spec(VarianceModel::Garch11, Normal{}, MeanModel::Zero);
    // init_var from the data is irrelevant after the first step only if it equals omega, so
    // set omega to the sample second moment.
    double s2 = 0.0;
    for (double v : x) s2 += v * v;
    s2 /= static_cast<double>(x.size());
    const double ll = log_likelihood(spec, garch(s2, 0.0, 0.0), x);
    double iid = 0.0;
    for (double v : x) iid += -0.5 * std::log(2.0 * std::numbers::pi * s2) - 0.5 * v * v / s2;
    CHECK(std::abs(ll - iid) < 1e-10);
}

TEST_CASE("log-likelihood matches the brute-force oracle") {
    const auto data = fixture_returns(9, 300);
    Rng rng(99);
    for (auto v : {VarianceModel::Garch11, VarianceModel::GjrGarch111, VarianceModel::Egarch111}) {
        for (const ResidualDistribution& d : {ResidualDistribution{Normal{}}, ResidualDistribution{StudentT{8}},
                                              ResidualDistribution{SkewT{8, -0.1}}}) {
            for (auto mean : {MeanModel::Constant, MeanModel::Zero}) {
                const auto spec = make_spec(v, d, mean);
                const auto od = testing::oracle_density(d);
                const double em = oracle::abs_mean(od);
                for (int draw = 0; draw < 10; ++draw) {
                    const auto p = testing::random_params(spec, rng);
                    const oracle::Params op{p.mu, p.omega, p.alpha, p.beta, p.gamma};
                    const double expected = oracle::loglik(testing::oracle_model(v), op, od, em, data, mean == MeanModel::Zero);
                    CHECK(std::abs(log_likelihood(spec, p, data) - expected) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("finite-difference gradient is consistent with a five-point stencil") {
    // Inference relies on finite differences of the log-likelihood; bind their accuracy.
    const auto data = fixture_returns(10, 400);
    Rng rng(5);
    for (auto v : {VarianceModel::Garch11, VarianceModel::GjrGarch111, VarianceModel::Egarch111}) {
        const auto spec = make_spec(v, StudentT{7});
        const optim::Objective ll = [&](std::span<const double> th) {
            return log_likelihood(spec, from_vector(spec, th), data);
        };
        for (int point = 0; point < 20; ++point) {
            auto p = testing::random_params(spec, rng);
            p.alpha = std::max(p.alpha, 0.02);
            const auto theta = to_vector(spec, p);
            const auto g = optim::central_gradient(ll, theta, 1e-6);
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double h = 1e-4 * std::max(0.01, std::abs(theta[i]));
                auto at = [&](double dx) {
                    auto t = theta;
                    t[i] += dx;
                    return ll(t);
                };
                const double ref = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
                CHECK(std::abs(g[i] - ref) <= 1e-5 * std::max(1.0, std::abs(ref)));
            }
        }
    }
}

TEST_CASE("long-run variance anchors") {
    CHECK(std::abs(long_run_variance(make_spec(VarianceModel::Garch11), garch(0.159, 0.058, 0.892)) - 3.18) < 1e-12);
    auto gjr = garch(0.1, 0.01, 0.92);
    gjr.gamma = 0.08;
    CHECK(long_run_variance(make_spec(VarianceModel::GjrGarch111), gjr) == doctest::Approx(0.1 / 0.03));
    CHECK(long_run_variance(make_spec(VarianceModel::Egarch111), garch(0.03, 0.1, 0.97)) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("fit recovers a GARCH(1,1) path") {
    const auto path = simulate_path(ModelSpec{}, garch(0.1, 0.08, 0.9, 0.05), 5000, 500, 42);
    const auto f = fit(ModelSpec{}, path.returns.values);
    CHECK(std::abs(f.params.omega - 0.1) < 0.05);
    CHECK(std::abs(f.params.alpha - 0.08) < 0.05);
    CHECK(std::abs(f.params.beta - 0.9) < 0.05);
    CHECK(f.inference_available);
    CHECK(f.params.beta > 0.8);
    REQUIRE(f.estimates.size() == 4);
    CHECK(f.estimates[3].name == "beta");
    CHECK(f.estimates[3].pvalue < 1e-6);
    CHECK(f.cond_vol.size() == 5000);
    CHECK(f.aic == doctest::Approx(8.0 - 2.0 * f.loglik));
    CHECK(f.bic == doctest::Approx(4.0 * std::log(5000.0) - 2.0 * f.loglik));
}

TEST_CASE("fitted optimum is locally optimal") {
    const auto path = simulate_path(make_spec(VarianceModel::GjrGarch111, StudentT{6}),
                                    [] {
                                        auto p = garch(0.05, 0.03, 0.9, 0.02);
                                        p.gamma = 0.08;
                                        p.dist = StudentT{6};
                                        return p;
                                    }(),
                                    3000, 500, 3);
    for (auto v : {VarianceModel::Garch11, VarianceModel::GjrGarch111, VarianceModel::Egarch111}) {
        const auto spec = make_spec(v, StudentT{8});
        const auto f = fit(spec, path.returns.values);
        const auto theta = to_vector(spec, f.params);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            for (double d : {-0.01, 0.01}) {
                auto t = theta;
                t[i] += d;
                const auto p = from_vector(spec, t);
                try {
                    validate(spec, p);
                } catch (const ValidationError&) {
                    continue;
                }
                CHECK(log_likelihood(spec, p, path.returns.values) <= f.loglik + 1e-6);
            }
        }
    }
}

TEST_CASE("unconditional variance matches the sample variance") {
    const auto path = simulate_path(ModelSpec{}, garch(0.05, 0.08, 0.9), 10000, 500, 8);
    const auto f = fit(ModelSpec{}, path.returns.values);
    const double sd = sample_sd(path.returns.values);
    const double lr = f.params.omega / (1.0 - f.params.alpha - f.params.beta);
    CHECK(lr == doctest::Approx(sd * sd).epsilon(0.2));
}

TEST_CASE("iid data gives no spurious ARCH effect") {
    // A boundary optimum leaves the Hessian indefinite; inference is then withheld,
    // which also means alpha is not declared significant.
    int not_significant = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(500 + seed);
        const auto x = sample(Normal{}, rng, 2000);
        const auto f = fit(ModelSpec{}, x);
        CHECK(std::abs(f.params.alpha) < 0.03);
        const double p = f.estimates[2].pvalue;
        if (!f.inference_available) {
            CHECK(std::isnan(p));
            CHECK_FALSE(f.warnings.empty());
        }
        not_significant += !(p <= 0.05);
    }
    CHECK(not_significant >= 16);
}

TEST_CASE("cond_vol regenerates from the stored parameters") {
    const auto x = fixture_returns(12, 1500);
    for (auto v : {VarianceModel::Garch11, VarianceModel::GjrGarch111, VarianceModel::Egarch111}) {
        const auto f = fit(make_spec(v, SkewT{8, 0.0}), x);
        const auto var = variance_filter(f.spec, f.params, f.residuals, f.init_var);
        for (std::size_t t = 0; t < var.size(); ++t) {
            CHECK(std::sqrt(var[t]) == f.cond_vol[t]);
            CHECK(f.std_residuals[t] == f.residuals[t] / f.cond_vol[t]);
        }
    }
}

TEST_CASE("zero-mean fit on identity ARMA residuals equals a direct fit") {
    const auto x = fixture_returns(13, 1200);
    const auto spec = make_spec(VarianceModel::Garch11, Normal{}, MeanModel::Zero);
    const auto arma = fit_arma(x, {0, 0, 0, false});
    const auto a = fit_on_arma_residuals(arma, spec);
    const auto b = fit(spec, x);
    CHECK(to_vector(spec, a.params) == to_vector(spec, b.params));
    CHECK(a.loglik == b.loglik);
    CHECK(a.cond_vol == b.cond_vol);
    CHECK_THROWS_AS(fit_on_arma_residuals(arma, ModelSpec{}), std::invalid_argument);
}

TEST_CASE("variance equation recovered after AR(1) filtering") {
    const auto path = simulate_path(make_spec(VarianceModel::Garch11, Normal{}, MeanModel::Zero),
                                    garch(0.1, 0.08, 0.9), 5000, 500, 21);
    std::vector<double> y(path.innovations.size());
    double prev = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = prev = 0.5 * prev + path.innovations[t];
    const auto arma = fit_arma(y, {1, 0, 0, false});
    const auto f = fit_on_arma_residuals(arma, make_spec(VarianceModel::Garch11, Normal{}, MeanModel::Zero));
    CHECK(std::abs(f.params.alpha - 0.08) < 0.05);
    CHECK(std::abs(f.params.beta - 0.9) < 0.05);
}

TEST_CASE("convergence failure carries the best point") {
    FitOptions opt;
    opt.optimizer.simplex_max_iter = 3;
    opt.optimizer.max_iter = 1;
    const auto x = fixture_returns(14, 600);
    try {
        fit(ModelSpec{}, x, opt);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.best_params().size() == 4);
        CHECK(std::isfinite(e.best_loglik()));
    }
}

TEST_CASE("insufficient data") {
    CHECK_THROWS_AS(fit(ModelSpec{}, fixture_returns(1, 100)), InsufficientDataError);
}

TEST_CASE("json schema") {
    const auto x = fixture_returns(15, 800);
    const auto g = to_json(fit(ModelSpec{}, x));
    CHECK_FALSE(g["params"].contains("gamma"));
    CHECK(g["params"].contains("omega"));
    const auto e = to_json(fit(make_spec(VarianceModel::Egarch111, StudentT{8}), x));
    CHECK(e["params"].contains("gamma"));
    CHECK(e["params"].contains("nu"));
    CHECK(e["params"]["beta"].contains("stderr"));
    CHECK(e["model"]["variance"] == "egarch");
}

}
