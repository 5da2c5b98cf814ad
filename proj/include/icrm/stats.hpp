#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "icrm/rng.hpp"

namespace icrm {

/// Draws sorted ascending.
class EmpiricalSample {
public:
    explicit EmpiricalSample(std::vector<double> draws);

    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] const std::vector<double>& sorted() const noexcept { return sorted_; }
    [[nodiscard]] double operator[](std::size_t i) const { return sorted_[i]; }

private:
    std::vector<double> sorted_;
};

using CdfFunction = std::function<double(double)>;
using QuantileFunction = std::function<double(double)>;

/// Linear interpolation of order statistics at h = (size - 1) p + 1.
/// Throws std::invalid_argument for an empty sample, std::domain_error unless 0 <= p <= 1.
double empirical_quantile(const EmpiricalSample& sample, double p);

/// sup |ECDF - F| with both one-sided gaps. `cdf_left` gives P(X < x); pass
/// an empty function when F is continuous.
double ks_one_sample(const EmpiricalSample& sample, const CdfFunction& cdf,
                     const CdfFunction& cdf_left = {});

double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b);

/// Critical values of the Kolmogorov statistic at level 1% (asymptotic).
double ks_one_sample_critical_1pct(std::size_t size);
double ks_two_sample_critical_1pct(std::size_t size_a, std::size_t size_b);

struct ProbabilityPair {
    double empirical;
    double model;
};

/// (i / size, F(x_(i))) for i = 1..size.
std::vector<ProbabilityPair> pp_points(const EmpiricalSample& sample, const CdfFunction& cdf);

struct QuantilePair {
    double p;
    double empirical;
    double model;
};

std::vector<QuantilePair> qq_points(const EmpiricalSample& sample, const QuantileFunction& quantile,
                                    std::span<const double> probs);

struct LaplaceGrid {
    std::vector<double> u;
    std::vector<double> v;
    /// value[a][b] is the estimate at (u[a], v[b]).
    std::vector<std::vector<double>> value;
    std::vector<std::vector<double>> standard_error;
};

/// Averages of exp(-u S - v M) with nonparametric bootstrap standard errors.
LaplaceGrid empirical_laplace(std::span<const std::pair<double, std::uint64_t>> sample,
                              std::span<const double> u, std::span<const double> v,
                              const RngStream& bootstrap_stream, std::size_t bootstrap = 200);

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
};

/// Goodness of fit of a sample of non-negative integers to a pmf on {0, 1, ...}. Cells with
/// expected count below 5 are pooled with their neighbours; the tail above the
/// last cell is its own cell.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> pmf);

/// Test that two samples of non-negative integers share one distribution
/// (2 x k contingency table; sparse cells pooled).
ChiSquareResult chi_square_homogeneity(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b);

/// Streaming mean and variance (Welford), mergeable.
class RunningMoments {
public:
    void add(double x) noexcept;
    void merge(const RunningMoments& other) noexcept;

    [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
    [[nodiscard]] double mean() const noexcept { return mean_; }
    /// Unbiased sample variance; 0 when fewer than two values.
    [[nodiscard]] double variance() const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace icrm
