#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "icrm/distributions.hpp"
#include "icrm/rng.hpp"

namespace icrm {

/// Example a): independent infections on the diagonal only.
struct StandardModel {
    double p_J;
};

/// Example b): one edge variable per unordered pair, zero diagonal.
struct ErdosRenyiModel {
    double p_K;
};

/// Example c): undirected edge, then a fair coin picks its direction.
struct CountermonotonicErModel {
    double p_K;
};

/// Example d): independent infections plus undirected transmissions.
struct ErWithInfectionsModel {
    double p_J;
    double p_K;
};

/// Example e): I(i,j) = J_j * K(i,j) off the diagonal, I(j,j) = J_j.
/// Transmissions originate only at infected entities.
struct ContagionModel {
    double p_J;
    double p_K;
};

/// Dissociated graphon given as a piecewise-constant symmetric k x k grid on
/// [0,1]^2. Off-diagonal entries are symmetric edges; the diagonal is an
/// independent Bernoulli(diag_p) infection.
class GraphonModel {
public:
    GraphonModel(std::vector<std::vector<double>> grid, double diag_p);

    /// Constant graphon W == p.
    static GraphonModel constant(double p, double diag_p = 0.0);

    [[nodiscard]] std::size_t resolution() const noexcept { return k_; }
    [[nodiscard]] double diag_p() const noexcept { return diag_p_; }
    /// W evaluated at latent positions (u, v) in [0,1).
    [[nodiscard]] double edge_probability(double u, double v) const noexcept;
    [[nodiscard]] double cell(std::size_t a, std::size_t b) const noexcept { return w_[a * k_ + b]; }

private:
    std::size_t k_;
    std::vector<double> w_;
    double diag_p_;
};

using InteractionModel = std::variant<StandardModel, ErdosRenyiModel, CountermonotonicErModel,
                                      ErWithInfectionsModel, ContagionModel, GraphonModel>;

/// Throws ParameterError for probabilities outside [0,1].
void validate(const InteractionModel& model);

std::string model_name(const InteractionModel& model);

/// Top-left n x n corner of the indicator array I, row-major.
class IndicatorMatrix {
public:
    explicit IndicatorMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::uint8_t operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * n_ + j];
    }
    void set(std::size_t i, std::size_t j, std::uint8_t v) noexcept { entries_[i * n_ + j] = v; }
    [[nodiscard]] std::size_t count() const noexcept;

private:
    std::size_t n_;
    std::vector<std::uint8_t> entries_;
};

/// Calls visit(i, j) once for every cell with I(i,j) = 1, drawing the latent
/// variables of the model in a fixed order. Cells are 0-based.
template <class Visit>
void for_each_active_cell(const InteractionModel& model, std::size_t n, RandomEngine& engine,
                          Visit&& visit) {
    auto coin = [&engine](double p) { return engine.bernoulli(p); };
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, StandardModel>) {
                for (std::size_t i = 0; i < n; ++i)
                    if (coin(m.p_J)) visit(i, i);
            } else if constexpr (std::is_same_v<M, ErdosRenyiModel>) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (coin(m.p_K)) {
                            visit(i, j);
                            visit(j, i);
                        }
            } else if constexpr (std::is_same_v<M, CountermonotonicErModel>) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) {
                        const bool edge = coin(m.p_K);
                        const bool upper = coin(0.5);
                        if (edge) upper ? visit(i, j) : visit(j, i);
                    }
            } else if constexpr (std::is_same_v<M, ErWithInfectionsModel>) {
                for (std::size_t i = 0; i < n; ++i)
                    if (coin(m.p_J)) visit(i, i);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (coin(m.p_K)) {
                            visit(i, j);
                            visit(j, i);
                        }
            } else if constexpr (std::is_same_v<M, ContagionModel>) {
                // Column j carries J_j; K(i,j) only matters when J_j = 1.
                for (std::size_t j = 0; j < n; ++j) {
                    if (!coin(m.p_J)) continue;
                    visit(j, j);
                    for (std::size_t i = 0; i < n; ++i)
                        if (i != j && coin(m.p_K)) visit(i, j);
                }
            } else {
                std::vector<double> latent(n);
                for (auto& u : latent) u = engine.uniform();
                for (std::size_t i = 0; i < n; ++i)
                    if (coin(m.diag_p())) visit(i, i);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j)
                        if (coin(m.edge_probability(latent[i], latent[j]))) {
                            visit(i, j);
                            visit(j, i);
                        }
            }
        },
        model);
}

IndicatorMatrix sample_indicators(const InteractionModel& model, std::size_t n,
                                  RandomEngine& engine);

/// Labels for the pairs of corner cells whose joint law enters the variance
/// of the per-event loss (1-based cell names in the identifiers).
enum class CellPair {
    d11_o12,  ///< (1,1) & (1,2)
    d11_o21,  ///< (1,1) & (2,1)
    o12_o21,  ///< (1,2) & (2,1)
    o12_o13,  ///< (1,2) & (1,3)
    o12_o31,  ///< (1,2) & (3,1)
    o21_o13,  ///< (2,1) & (1,3)
    o21_o31,  ///< (2,1) & (3,1)
};

inline constexpr std::size_t kCellPairCount = 7;

struct EdgeProbabilities {
    double p_diag = 0.0;  ///< P(I(1,1) = 1)
    double p_off = 0.0;   ///< P(I(1,2) = 1)
    std::array<double, kCellPairCount> joint{};

    [[nodiscard]] double operator[](CellPair pair) const noexcept {
        return joint[static_cast<std::size_t>(pair)];
    }
};

/// Closed-form marginal and pairwise activation probabilities. Throws
/// UnsupportedAnalytics for graphons.
EdgeProbabilities edge_moment_probabilities(const InteractionModel& model);

}  // namespace icrm
