#pragma once

#include <cstdint>
#include <string>

#include "icrm/errors.hpp"
#include "icrm/rng.hpp"

namespace icrm {

/// Gamma law in the shape-scale convention: mean shape*scale.
class GammaParams {
public:
    GammaParams(double shape, double scale);

    [[nodiscard]] double shape() const noexcept { return shape_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double mean() const noexcept { return shape_ * scale_; }
    [[nodiscard]] double variance() const noexcept { return shape_ * scale_ * scale_; }

    friend bool operator==(const GammaParams&, const GammaParams&) = default;

private:
    double shape_;
    double scale_;
};

/// |X| for X ~ N(0, scale^2). `scale` is the standard deviation of the
/// underlying normal, not its variance.
class HalfNormalParams {
public:
    explicit HalfNormalParams(double scale);

    /// Builds from the variance of the underlying normal.
    static HalfNormalParams from_variance(double variance);

    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double variance() const noexcept;
    [[nodiscard]] double second_moment() const noexcept { return scale_ * scale_; }

    friend bool operator==(const HalfNormalParams&, const HalfNormalParams&) = default;

private:
    double scale_;
};

class BernoulliParams {
public:
    explicit BernoulliParams(double p);

    [[nodiscard]] double p() const noexcept { return p_; }

    friend bool operator==(const BernoulliParams&, const BernoulliParams&) = default;

private:
    double p_;
};

/// Throws ParameterError unless 0 <= p <= 1.
void check_probability(double p, const std::string& name);

double sample_standard_normal(RandomEngine& engine);
double sample_gamma(const GammaParams& params, RandomEngine& engine);
double sample_half_normal(const HalfNormalParams& params, RandomEngine& engine);
std::uint8_t sample_bernoulli(const BernoulliParams& params, RandomEngine& engine);

/// Inversion below rate 10, Hormann's transformed rejection (PTRS) above.
std::uint64_t sample_poisson(double rate, RandomEngine& engine);

/// Exponential with unit rate.
double sample_exponential(RandomEngine& engine);

/// Distribution function of N(mean, var). var == 0 is the point mass at mean.
double normal_cdf(double x, double mean = 0.0, double var = 1.0);

/// Inverse of normal_cdf. Throws std::domain_error unless 0 < p < 1 and var > 0.
double normal_quantile(double p, double mean = 0.0, double var = 1.0);

}  // namespace icrm
