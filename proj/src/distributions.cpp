#include "volcast/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "volcast/error.hpp"

namespace volcast {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// log of Gamma((nu+1)/2) / (Gamma(nu/2) sqrt(pi (nu-2)))
double log_t_constant(double nu) {
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
           0.5 * std::log(std::numbers::pi * (nu - 2.0));
}

double t_abs_moment(double nu) {
    return 2.0 * std::exp(log_t_constant(nu)) * (nu - 2.0) / (nu - 1.0);
}

struct SkewShape {
    double a, b;
};

SkewShape skew_shape(double nu, double lambda) {
    const double c = std::exp(log_t_constant(nu));
    const double a = 4.0 * lambda * c * (nu - 2.0) / (nu - 1.0);
    return {a, std::sqrt(1.0 + 3.0 * lambda * lambda - a * a)};
}

// CDF of the unit-variance t.
double unit_t_cdf(double nu, double w) {
    const boost::math::students_t_distribution<double> t(nu);
    return boost::math::cdf(t, w * std::sqrt(nu / (nu - 2.0)));
}

// Integral of u f(u) over (-inf, w] for the unit-variance t density f.
double unit_t_partial_mean(double nu, double w) {
    return -std::exp(log_t_constant(nu)) * (nu - 2.0) / (nu - 1.0) *
           std::pow(1.0 + w * w / (nu - 2.0), -0.5 * (nu - 1.0));
}

// Integral of |p w - q| f(w) over [lo, hi], p > 0, infinite ends allowed.
double abs_linear_moment(double nu, double p, double q, double lo, double hi) {
    auto cdf = [nu](double w) { return std::isinf(w) ? (w > 0 ? 1.0 : 0.0) : unit_t_cdf(nu, w); };
    auto mean = [nu](double w) { return std::isinf(w) ? 0.0 : unit_t_partial_mean(nu, w); };
    auto signed_part = [&](double l, double h) { return p * (mean(h) - mean(l)) - q * (cdf(h) - cdf(l)); };
    const double root = q / p;
    if (root <= lo) return signed_part(lo, hi);
    if (root >= hi) return -signed_part(lo, hi);
    return signed_part(root, hi) - signed_part(lo, root);
}

// Draw from the unit-variance t.
double unit_t_draw(double nu, Rng& rng) {
    const double z = rng.normal();
    const double chi2 = 2.0 * rng.gamma(0.5 * nu);
    return z / std::sqrt(chi2 / nu) * std::sqrt((nu - 2.0) / nu);
}

}  // namespace

void validate(const ResidualDistribution& dist) {
    std::visit(overloaded{
                   [](const Normal&) {},
                   [](const StudentT& d) {
                       if (!(d.nu > 2.0) || !std::isfinite(d.nu)) {
                           throw ValidationError("Student-t requires finite nu > 2");
                       }
                   },
                   [](const SkewT& d) {
                       if (!(d.nu > 2.0) || !std::isfinite(d.nu)) {
                           throw ValidationError("skewed t requires finite nu > 2");
                       }
                       if (!(std::abs(d.lambda) < 1.0)) {
                           throw ValidationError("skewed t requires |lambda| < 1");
                       }
                   },
               },
               dist);
}

std::string distribution_name(const ResidualDistribution& dist) {
    return std::visit(overloaded{
                          [](const Normal&) { return std::string("normal"); },
                          [](const StudentT&) { return std::string("t"); },
                          [](const SkewT&) { return std::string("skewt"); },
                      },
                      dist);
}

StandardizedDensity::StandardizedDensity(const ResidualDistribution& dist) {
    validate(dist);
    std::visit(overloaded{
                   [this](const Normal&) { kind_ = Kind::Normal; },
                   [this](const StudentT& d) {
                       kind_ = Kind::StudentT;
                       nu_ = d.nu;
                       log_c_ = log_t_constant(d.nu);
                   },
                   [this](const SkewT& d) {
                       kind_ = Kind::SkewT;
                       nu_ = d.nu;
                       lambda_ = d.lambda;
                       log_c_ = log_t_constant(d.nu);
                       const auto s = skew_shape(d.nu, d.lambda);
                       a_ = s.a;
                       b_ = s.b;
                       log_b_ = std::log(s.b);
                   },
               },
               dist);
}

double StandardizedDensity::log_pdf(double z) const {
    switch (kind_) {
        case Kind::Normal:
            return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
        case Kind::StudentT:
            return log_c_ - 0.5 * (nu_ + 1.0) * std::log1p(z * z / (nu_ - 2.0));
        case Kind::SkewT: {
            const double y = b_ * z + a_;
            const double scale = y < 0.0 ? 1.0 - lambda_ : 1.0 + lambda_;
            const double u = y / scale;
            return log_b_ + log_c_ - 0.5 * (nu_ + 1.0) * std::log1p(u * u / (nu_ - 2.0));
        }
    }
    return 0.0;
}

double log_density(const ResidualDistribution& dist, double z) {
    return StandardizedDensity(dist).log_pdf(z);
}

double abs_moment(const ResidualDistribution& dist) {
    validate(dist);
    return std::visit(
        overloaded{
            [](const Normal&) { return std::sqrt(2.0 / std::numbers::pi); },
            [](const StudentT& d) { return t_abs_moment(d.nu); },
            [](const SkewT& d) {
                // With w = (bZ + a) / (1 -+ lambda), w follows the unit-variance t on each side of 0.
                const auto s = skew_shape(d.nu, d.lambda);
                const double inf = std::numeric_limits<double>::infinity();
                const double l = 1.0 - d.lambda, r = 1.0 + d.lambda;
                return (l * abs_linear_moment(d.nu, l, s.a, -inf, 0.0) + r * abs_linear_moment(d.nu, r, s.a, 0.0, inf)) /
                       s.b;
            },
        },
        dist);
}

double prob_negative(const ResidualDistribution& dist) {
    validate(dist);
    return std::visit(overloaded{
                          [](const Normal&) { return 0.5; },
                          [](const StudentT&) { return 0.5; },
                          [](const SkewT& d) {
                              // Z < 0  <=>  Y = bZ + a < a, with Y piecewise-scaled t.
                              const auto s = skew_shape(d.nu, d.lambda);
                              if (s.a < 0.0) {
                                  return (1.0 - d.lambda) * unit_t_cdf(d.nu, s.a / (1.0 - d.lambda));
                              }
                              return 0.5 * (1.0 - d.lambda) +
                                     (1.0 + d.lambda) * (unit_t_cdf(d.nu, s.a / (1.0 + d.lambda)) - 0.5);
                          },
                      },
                      dist);
}

double Rng::uniform() {
    // 53 random mantissa bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double draw(const ResidualDistribution& dist, Rng& rng) {
    return std::visit(overloaded{
                          [&rng](const Normal&) { return rng.normal(); },
                          [&rng](const StudentT& d) { return unit_t_draw(d.nu, rng); },
                          [&rng](const SkewT& d) {
                              const auto s = skew_shape(d.nu, d.lambda);
                              const double w = std::abs(unit_t_draw(d.nu, rng));
                              const double y = rng.uniform() < 0.5 * (1.0 - d.lambda)
                                                   ? -(1.0 - d.lambda) * w
                                                   : (1.0 + d.lambda) * w;
                              return (y - s.a) / s.b;
                          },
                      },
                      dist);
}

std::vector<double> sample(const ResidualDistribution& dist, Rng& rng, std::size_t n) {
    validate(dist);
    std::vector<double> out(n);
    for (auto& v : out) v = draw(dist, rng);
    return out;
}

}  // namespace volcast
