#include "icrm/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace icrm {

namespace {

// 256-layer ziggurat for the standard normal (Marsaglia & Tsang 2000,
// layout after Doornik 2005).
constexpr int kLayers = 256;
constexpr double kTailStart = 3.6541528853610088;
constexpr double kLayerArea = 0.00492867323399;

struct ZigguratTables {
    std::array<double, kLayers + 1> x{};
    std::array<double, kLayers> ratio{};

    ZigguratTables() {
        auto density = [](double v) { return std::exp(-0.5 * v * v); };
        x[0] = kLayerArea / density(kTailStart);
        x[1] = kTailStart;
        for (int i = 2; i < kLayers; ++i) {
            x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + density(x[i - 1])));
        }
        x[kLayers] = 0.0;
        for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

const ZigguratTables& ziggurat() {
    static const ZigguratTables tables;
    return tables;
}

double normal_tail(RandomEngine& engine, bool negative) {
    double x;
    double y;
    do {
        x = std::log(engine.uniform_open()) / kTailStart;
        y = std::log(engine.uniform_open());
    } while (-2.0 * y < x * x);
    return negative ? x - kTailStart : kTailStart - x;
}

double gamma_shape_at_least_one(double shape, RandomEngine& engine) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = sample_standard_normal(engine);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = engine.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::uint64_t poisson_inversion(double rate, RandomEngine& engine) {
    const double u = engine.uniform();
    double term = std::exp(-rate);
    double cumulative = term;
    std::uint64_t k = 0;
    // The cap only guards against u within rounding of 1.
    while (u >= cumulative && k < 1000) {
        ++k;
        term *= rate / static_cast<double>(k);
        cumulative += term;
    }
    return k;
}

std::uint64_t poisson_ptrs(double rate, RandomEngine& engine) {
    const double log_rate = std::log(rate);
    const double b = 0.931 + 2.53 * std::sqrt(rate);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = engine.uniform() - 0.5;
        const double v = engine.uniform_open();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -rate + k * log_rate - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace

void check_probability(double p, const std::string& name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(name + " must lie in [0, 1], got " + std::to_string(p));
    }
}

GammaParams::GammaParams(double shape, double scale) : shape_(shape), scale_(scale) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw ParameterError("gamma shape must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("gamma scale must be positive");
}

HalfNormalParams::HalfNormalParams(double scale) : scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ParameterError("half-normal scale must be positive");
    }
}

HalfNormalParams HalfNormalParams::from_variance(double variance) {
    if (!(variance > 0.0)) throw ParameterError("half-normal variance must be positive");
    return HalfNormalParams(std::sqrt(variance));
}

double HalfNormalParams::mean() const noexcept {
    return scale_ * std::sqrt(2.0 / std::numbers::pi);
}

double HalfNormalParams::variance() const noexcept {
    return scale_ * scale_ * (1.0 - 2.0 / std::numbers::pi);
}

BernoulliParams::BernoulliParams(double p) : p_(p) { check_probability(p, "Bernoulli p"); }

double sample_standard_normal(RandomEngine& engine) {
    const auto& zig = ziggurat();
    for (;;) {
        const std::uint64_t bits = engine.next_u64();
        const int layer = static_cast<int>(bits & 0xFF);
        const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
        if (std::fabs(u) < zig.ratio[layer]) return u * zig.x[layer];
        if (layer == 0) return normal_tail(engine, u < 0.0);
        const double x = u * zig.x[layer];
        const double f0 = std::exp(-0.5 * (zig.x[layer] * zig.x[layer] - x * x));
        const double f1 = std::exp(-0.5 * (zig.x[layer + 1] * zig.x[layer + 1] - x * x));
        if (f1 + engine.uniform() * (f0 - f1) < 1.0) return x;
    }
}

double sample_gamma(const GammaParams& params, RandomEngine& engine) {
    const double shape = params.shape();
    if (shape >= 1.0) return params.scale() * gamma_shape_at_least_one(shape, engine);
    // G(a) = G(a + 1) * U^(1/a)
    const double g = gamma_shape_at_least_one(shape + 1.0, engine);
    return params.scale() * g * std::exp(std::log(engine.uniform_open()) / shape);
}

double sample_half_normal(const HalfNormalParams& params, RandomEngine& engine) {
    return params.scale() * std::fabs(sample_standard_normal(engine));
}

std::uint8_t sample_bernoulli(const BernoulliParams& params, RandomEngine& engine) {
    return engine.bernoulli(params.p()) ? 1 : 0;
}

std::uint64_t sample_poisson(double rate, RandomEngine& engine) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ParameterError("Poisson rate must be >= 0");
    if (rate == 0.0) return 0;
    return rate < 10.0 ? poisson_inversion(rate, engine) : poisson_ptrs(rate, engine);
}

double sample_exponential(RandomEngine& engine) { return -std::log(engine.uniform_open()); }

double normal_cdf(double x, double mean, double var) {
    if (!(var >= 0.0)) throw std::domain_error("normal_cdf: variance must be non-negative");
    if (var == 0.0) return x >= mean ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

double normal_quantile(double p, double mean, double var) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
    if (!(var > 0.0)) throw std::domain_error("normal_quantile: variance must be positive");
    const double z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    return mean + std::sqrt(var) * z;
}

}  // namespace icrm
