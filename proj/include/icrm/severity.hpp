#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "icrm/distributions.hpp"
#include "icrm/rng.hpp"

namespace icrm {

/// Marginal law of an i.i.d. severity cell: gamma, half-normal, or the sum of
/// independent gamma and half-normal components.
struct SeverityMarginal {
    std::optional<GammaParams> gamma;
    std::optional<HalfNormalParams> half_normal;

    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double variance() const noexcept;
    double sample(RandomEngine& engine) const;
};

/// Every cell drawn independently from the same marginal.
struct IidSeverity {
    SeverityMarginal marginal;
};

/// Z(i,j) = a * Zt_j + b: each column shares one gamma draw Zt_j.
struct ComonotonicSeverity {
    GammaParams base;
    double a = 1.0;
    double b = 0.0;
};

/// Z(i,j) = Zt_j + eps(i,j): shared gamma component per column plus an
/// independent half-normal shock per cell.
struct PositiveDependentSeverity {
    GammaParams contagious;
    HalfNormalParams shock;
};

/// Same marginal as PositiveDependentSeverity, but the gamma component is
/// drawn afresh for every cell, so all cells are independent.
struct IndependentVariantSeverity {
    GammaParams contagious;
    HalfNormalParams shock;
};

using SeverityModel = std::variant<IidSeverity, ComonotonicSeverity, PositiveDependentSeverity,
                                   IndependentVariantSeverity>;

void validate(const SeverityModel& model);
std::string model_name(const SeverityModel& model);

/// True when cells are i.i.d. (the collective-model equivalence applies).
bool has_independent_cells(const SeverityModel& model);

/// Top-left n x n corner of the severity array Z, row-major.
class SeverityMatrix {
public:
    explicit SeverityMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * n_ + j];
    }
    void set(std::size_t i, std::size_t j, double v) noexcept { entries_[i * n_ + j] = v; }

private:
    std::size_t n_;
    std::vector<double> entries_;
};

/// Draws cells of one severity array on demand. Column-shared components are
/// drawn the first time their column is touched, so only the cells that
/// are actually needed consume randomness. Each cell may be requested at
/// most once per sampler.
class SeveritySampler {
public:
    SeveritySampler(const SeverityModel& model, std::size_t n, RandomEngine& engine);

    double operator()(std::size_t i, std::size_t j);

    /// One draw from the cell marginal, independent of everything else.
    double fresh_marginal();

private:
    double column_component(std::size_t j);

    const SeverityModel* model_;
    RandomEngine* engine_;
    std::vector<double> column_;
    std::vector<unsigned char> column_drawn_;
};

SeverityMatrix sample_severities(const SeverityModel& model, std::size_t n, RandomEngine& engine);

struct SeverityMoments {
    double mean = 0.0;               ///< E Z(1,1)
    double var = 0.0;                ///< Var Z(1,1)
    double within_column_cov = 0.0;  ///< Cov(Z(1,2), Z(3,2))
};

/// Closed-form moments. Cells in different columns are independent for every
/// model, so these three numbers fix all second moments of Z.
SeverityMoments severity_moments(const SeverityModel& model);

}  // namespace icrm
