#pragma once

#include <span>
#include <variant>
#include <vector>

#include "icrm/counting.hpp"

namespace icrm {

struct NormalApprox {
    double mean = 0.0;
    double var = 0.0;
};

/// One normal component; var == 0 is a point mass at `mean`.
struct MixtureComponent {
    double weight = 0.0;
    double mean = 0.0;
    double var = 0.0;
};

/// sum_m P(N = m) * N(m mu_L, m sigma^2_L); m = 0 is the point mass at 0.
struct CountMixture {
    std::vector<MixtureComponent> components;
};

/// Average over sampled operational times s of N(rate s mu_L, rate s (mu_L^2 + sigma^2_L)).
struct CoxMixtureMC {
    std::vector<double> time_samples;
    double rate = 0.0;
    double mu_L = 0.0;
    double sigma2_L = 0.0;
};

using AsymptoticDistribution = std::variant<NormalApprox, CountMixture, CoxMixtureMC>;

/// Throws ParameterError on negative variances or weights, or weights
/// summing outside [1 - 1e-12, 1] (up to rounding).
void validate(const AsymptoticDistribution& dist);

AsymptoticDistribution build_thm2_mixture(std::span<const CountProbability> pmf, double mu_L,
                                          double sigma2_L);

AsymptoticDistribution build_thm4b_normal(double rate, double t, double mu_L, double sigma2_L);

/// Throws ParameterError if `time_samples` is empty or has a non-positive entry.
AsymptoticDistribution build_thm4b_cox(std::vector<double> time_samples, double rate, double mu_L,
                                       double sigma2_L);

/// The distribution as a flat list of normal components.
std::vector<MixtureComponent> components(const AsymptoticDistribution& dist);

double mean(const AsymptoticDistribution& dist);

/// P(X <= x).
double cdf(const AsymptoticDistribution& dist, double x);

/// P(X < x); differs from cdf only at point masses.
double cdf_left(const AsymptoticDistribution& dist, double x);

/// Smallest x with cdf(x) >= p. Throws std::domain_error unless 0 < p < 1.
double quantile(const AsymptoticDistribution& dist, double p);

}  // namespace icrm
