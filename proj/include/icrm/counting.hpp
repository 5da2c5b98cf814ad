#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "icrm/rng.hpp"

namespace icrm {

/// Deterministic time change T given by piecewise-linear knots (t, T(t)) with
/// strictly increasing t, non-decreasing T, and T(0) = 0.
class TimeChangeTable {
public:
    explicit TimeChangeTable(std::vector<std::pair<double, double>> knots);

    /// Reads a two-column CSV "t,T". A non-numeric first line is taken as a header.
    static TimeChangeTable from_csv(const std::filesystem::path& path);

    /// Throws std::out_of_range outside [0, last knot].
    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& knots() const noexcept {
        return knots_;
    }

private:
    std::vector<std::pair<double, double>> knots_;
};

/// A random time change: returns one realisation of T(t) per call.
using RandomTimeChange = std::function<double(double t, RandomEngine&)>;

/// T(t) = G * t with G ~ Gamma(shape, scale) drawn once per path (a mixed
/// Poisson process).
RandomTimeChange gamma_scaled_time_change(double shape, double scale);

struct ConstantCount {
    std::uint64_t m = 0;
};

struct HomogeneousPoisson {
    double rate = 1.0;
};

struct CoxProcess {
    double base_rate = 1.0;
    std::variant<TimeChangeTable, RandomTimeChange> time_change;

    [[nodiscard]] bool deterministic() const noexcept {
        return std::holds_alternative<TimeChangeTable>(time_change);
    }
};

using CountingProcess = std::variant<ConstantCount, HomogeneousPoisson, CoxProcess>;

void validate(const CountingProcess& process);
std::string process_name(const CountingProcess& process);

/// N(t) at a single horizon.
std::uint64_t sample_count(const CountingProcess& process, double t, RandomEngine& engine);

/// Counts N(t_1) <= ... <= N(t_k) read off one simulated path. `times` must be
/// non-decreasing.
std::vector<std::uint64_t> sample_count_path(const CountingProcess& process,
                                             std::span<const double> times, RandomEngine& engine);

struct CountMoments {
    double mean = 0.0;
    double var = 0.0;
};

/// Closed-form mean and variance of N(t); nullopt for a random time change.
std::optional<CountMoments> count_mean_var(const CountingProcess& process, double t);

struct CountProbability {
    std::uint64_t m;
    double probability;
};

/// pmf of N(t) up to the point where the remaining mass is below
/// truncation_mass. Throws UnsupportedAnalytics for a random time change.
std::vector<CountProbability> count_pmf(const CountingProcess& process, double t,
                                        double truncation_mass = 1e-12);

/// pmf of Poisson(mean) truncated as in count_pmf.
std::vector<CountProbability> poisson_pmf(double mean, double truncation_mass = 1e-12);

}  // namespace icrm
