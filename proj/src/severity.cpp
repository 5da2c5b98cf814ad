#include "icrm/severity.hpp"

#include <type_traits>

namespace icrm {

double SeverityMarginal::mean() const noexcept {
    return (gamma ? gamma->mean() : 0.0) + (half_normal ? half_normal->mean() : 0.0);
}

double SeverityMarginal::variance() const noexcept {
    return (gamma ? gamma->variance() : 0.0) + (half_normal ? half_normal->variance() : 0.0);
}

double SeverityMarginal::sample(RandomEngine& engine) const {
    double z = 0.0;
    if (gamma) z += sample_gamma(*gamma, engine);
    if (half_normal) z += sample_half_normal(*half_normal, engine);
    return z;
}

void validate(const SeverityModel& model) {
    if (const auto* iid = std::get_if<IidSeverity>(&model)) {
        if (!iid->marginal.gamma && !iid->marginal.half_normal) {
            throw ParameterError("i.i.d. severity needs a gamma and/or half-normal component");
        }
    }
    if (const auto* co = std::get_if<ComonotonicSeverity>(&model)) {
        if (!(co->a >= 0.0)) throw ParameterError("comonotonic transform slope must be >= 0");
        if (!(co->b >= 0.0)) throw ParameterError("comonotonic transform offset must be >= 0");
    }
}

std::string model_name(const SeverityModel& model) {
    static constexpr const char* kNames[] = {"iid", "comonotonic", "positive_dependent",
                                             "independent"};
    return kNames[model.index()];
}

bool has_independent_cells(const SeverityModel& model) {
    return std::holds_alternative<IidSeverity>(model) ||
           std::holds_alternative<IndependentVariantSeverity>(model);
}

SeveritySampler::SeveritySampler(const SeverityModel& model, std::size_t n, RandomEngine& engine)
    : model_(&model), engine_(&engine) {
    if (std::holds_alternative<ComonotonicSeverity>(model) ||
        std::holds_alternative<PositiveDependentSeverity>(model)) {
        column_.assign(n, 0.0);
        column_drawn_.assign(n, 0);
    }
}

double SeveritySampler::column_component(std::size_t j) {
    if (!column_drawn_[j]) {
        const GammaParams& base = std::holds_alternative<ComonotonicSeverity>(*model_)
                                      ? std::get<ComonotonicSeverity>(*model_).base
                                      : std::get<PositiveDependentSeverity>(*model_).contagious;
        column_[j] = sample_gamma(base, *engine_);
        column_drawn_[j] = 1;
    }
    return column_[j];
}

double SeveritySampler::operator()(std::size_t /*i*/, std::size_t j) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, IidSeverity>) {
                return m.marginal.sample(*engine_);
            } else if constexpr (std::is_same_v<M, ComonotonicSeverity>) {
                return m.a * column_component(j) + m.b;
            } else if constexpr (std::is_same_v<M, PositiveDependentSeverity>) {
                const double shared = column_component(j);
                return shared + sample_half_normal(m.shock, *engine_);
            } else {
                const double own = sample_gamma(m.contagious, *engine_);
                return own + sample_half_normal(m.shock, *engine_);
            }
        },
        *model_);
}

double SeveritySampler::fresh_marginal() {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, IidSeverity>) {
                return m.marginal.sample(*engine_);
            } else if constexpr (std::is_same_v<M, ComonotonicSeverity>) {
                return m.a * sample_gamma(m.base, *engine_) + m.b;
            } else {
                const double g = sample_gamma(m.contagious, *engine_);
                return g + sample_half_normal(m.shock, *engine_);
            }
        },
        *model_);
}

SeverityMatrix sample_severities(const SeverityModel& model, std::size_t n, RandomEngine& engine) {
    if (n == 0) throw ParameterError("portfolio size n must be >= 1");
    validate(model);
    SeverityMatrix z(n);
    SeveritySampler sampler(model, n, engine);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z.set(i, j, sampler(i, j));
    return z;
}

SeverityMoments severity_moments(const SeverityModel& model) {
    validate(model);
    return std::visit(
        [](const auto& m) -> SeverityMoments {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, IidSeverity>) {
                return {m.marginal.mean(), m.marginal.variance(), 0.0};
            } else if constexpr (std::is_same_v<M, ComonotonicSeverity>) {
                const double v = m.a * m.a * m.base.variance();
                return {m.a * m.base.mean() + m.b, v, v};
            } else if constexpr (std::is_same_v<M, PositiveDependentSeverity>) {
                return {m.contagious.mean() + m.shock.mean(),
                        m.contagious.variance() + m.shock.variance(), m.contagious.variance()};
            } else {
                return {m.contagious.mean() + m.shock.mean(),
                        m.contagious.variance() + m.shock.variance(), 0.0};
            }
        },
        model);
}

}  // namespace icrm
