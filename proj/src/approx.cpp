#include "icrm/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icrm/distributions.hpp"
#include "icrm/errors.hpp"

namespace icrm {

namespace {

double mixture_cdf(std::span<const MixtureComponent> comps, double x, bool closed) {
    double total = 0.0;
    for (const auto& c : comps) {
        if (c.weight == 0.0) continue;
        if (c.var == 0.0) {
            if (closed ? x >= c.mean : x > c.mean) total += c.weight;
        } else {
            total += c.weight * normal_cdf(x, c.mean, c.var);
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

}  // namespace

void validate(const AsymptoticDistribution& dist) {
    if (const auto* cox = std::get_if<CoxMixtureMC>(&dist)) {
        if (cox->time_samples.empty()) throw ParameterError("Cox mixture needs time samples");
        for (double s : cox->time_samples) {
            if (!(s > 0.0)) throw ParameterError("Cox mixture time samples must be positive");
        }
        if (!(cox->rate > 0.0)) throw ParameterError("Cox mixture rate must be positive");
        if (cox->sigma2_L < 0.0) throw ParameterError("negative variance");
        return;
    }
    double weight = 0.0;
    for (const auto& c : components(dist)) {
        if (c.weight < 0.0) throw ParameterError("negative mixture weight");
        if (c.var < 0.0 || !std::isfinite(c.var)) throw ParameterError("invalid component variance");
        weight += c.weight;
    }
    if (weight < 1.0 - 1e-12 - 1e-14 || weight > 1.0 + 1e-12) {
        throw ParameterError("mixture weights must sum to 1 up to the truncation mass");
    }
}

AsymptoticDistribution build_thm2_mixture(std::span<const CountProbability> pmf, double mu_L,
                                          double sigma2_L) {
    if (sigma2_L < 0.0) throw ParameterError("sigma^2_L must be >= 0");
    CountMixture mix;
    mix.components.reserve(pmf.size());
    for (const auto& [m, w] : pmf) {
        const double md = static_cast<double>(m);
        mix.components.push_back({w, md * mu_L, md * sigma2_L});
    }
    return mix;
}

AsymptoticDistribution build_thm4b_normal(double rate, double t, double mu_L, double sigma2_L) {
    if (!(rate > 0.0) || !(t > 0.0)) throw ParameterError("rate and t must be positive");
    if (sigma2_L < 0.0) throw ParameterError("sigma^2_L must be >= 0");
    return NormalApprox{rate * t * mu_L, rate * t * (mu_L * mu_L + sigma2_L)};
}

AsymptoticDistribution build_thm4b_cox(std::vector<double> time_samples, double rate, double mu_L,
                                       double sigma2_L) {
    AsymptoticDistribution dist = CoxMixtureMC{std::move(time_samples), rate, mu_L, sigma2_L};
    validate(dist);
    return dist;
}

std::vector<MixtureComponent> components(const AsymptoticDistribution& dist) {
    return std::visit(
        [](const auto& d) -> std::vector<MixtureComponent> {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, NormalApprox>) {
                return {{1.0, d.mean, d.var}};
            } else if constexpr (std::is_same_v<D, CountMixture>) {
                return d.components;
            } else {
                std::vector<MixtureComponent> out;
                out.reserve(d.time_samples.size());
                const double w = 1.0 / static_cast<double>(d.time_samples.size());
                const double second = d.mu_L * d.mu_L + d.sigma2_L;
                for (double s : d.time_samples) {
                    out.push_back({w, d.rate * s * d.mu_L, d.rate * s * second});
                }
                return out;
            }
        },
        dist);
}

double mean(const AsymptoticDistribution& dist) {
    double m = 0.0;
    double w = 0.0;
    for (const auto& c : components(dist)) {
        m += c.weight * c.mean;
        w += c.weight;
    }
    return m / w;
}

double cdf(const AsymptoticDistribution& dist, double x) {
    if (const auto* n = std::get_if<NormalApprox>(&dist)) return normal_cdf(x, n->mean, n->var);
    if (const auto* m = std::get_if<CountMixture>(&dist)) return mixture_cdf(m->components, x, true);
    return mixture_cdf(components(dist), x, true);
}

double cdf_left(const AsymptoticDistribution& dist, double x) {
    if (const auto* m = std::get_if<CountMixture>(&dist)) return mixture_cdf(m->components, x, false);
    return mixture_cdf(components(dist), x, false);
}

double quantile(const AsymptoticDistribution& dist, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
    const auto comps = components(dist);

    double widest = 0.0;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& c : comps) {
        if (c.weight == 0.0) continue;
        widest = std::max(widest, std::sqrt(c.var));
        lo = std::min(lo, c.mean);
        hi = std::max(hi, c.mean);
    }
    double reach = std::max(12.0 * widest, 1e-9 * (1.0 + std::max(std::fabs(lo), std::fabs(hi))));
    lo -= reach;
    hi += reach;
    while (mixture_cdf(comps, lo, true) >= p) {
        lo -= reach;
        reach *= 2.0;
    }
    while (mixture_cdf(comps, hi, true) < p) {
        hi += reach;
        reach *= 2.0;
    }

    // Invariant: cdf(lo) < p <= cdf(hi).
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 1e-15 * (1.0 + std::fabs(hi))) break;
        if (mixture_cdf(comps, mid, true) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // The answer lies in (lo, hi]; if an atom sits there and already reaches p it is the answer.
    for (const auto& c : comps) {
        if (c.var == 0.0 && c.weight > 0.0 && c.mean > lo && c.mean <= hi &&
            mixture_cdf(comps, c.mean, true) >= p) {
            return c.mean;
        }
    }
    return hi;
}

}  // namespace icrm
