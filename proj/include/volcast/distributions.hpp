#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace volcast {

/// Standard normal innovations.
struct Normal {};

/// Student-t rescaled to unit variance. Requires nu > 2.
struct StudentT {
    double nu = 8.0;
};

/// Hansen's skewed t, standardized to mean 0 and variance 1.
/// `lambda` in (-1, 1) sets the asymmetry; lambda = 0 is the symmetric StudentT.
/// Negative lambda gives negative skewness.
struct SkewT {
    double nu = 8.0;
    double lambda = 0.0;
};

using ResidualDistribution = std::variant<Normal, StudentT, SkewT>;

/// Throws ValidationError if parameters leave the admissible region.
void validate(const ResidualDistribution& dist);

std::string distribution_name(const ResidualDistribution& dist);

/// Precomputed log-density of a unit-variance distribution. Construct once,
/// evaluate many times.
class StandardizedDensity {
public:
    explicit StandardizedDensity(const ResidualDistribution& dist);

    double log_pdf(double z) const;

private:
    enum class Kind { Normal, StudentT, SkewT } kind_;
    double nu_ = 0.0;
    double lambda_ = 0.0;
    double log_c_ = 0.0;  // log normalizing constant of the unit-variance t
    double a_ = 0.0;
    double b_ = 1.0;
    double log_b_ = 0.0;
};

double log_density(const ResidualDistribution& dist, double z);

/// E|Z| for the unit-variance member of the family.
double abs_moment(const ResidualDistribution& dist);

/// P(Z < 0).
double prob_negative(const ResidualDistribution& dist);

/// Deterministic random source. Draws are produced from the raw 64-bit
/// Mersenne Twister output by fixed transforms, so sequences are identical
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma(shape, 1), shape >= 1 (Marsaglia-Tsang).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
};

double draw(const ResidualDistribution& dist, Rng& rng);
std::vector<double> sample(const ResidualDistribution& dist, Rng& rng, std::size_t n);

}  // namespace volcast
