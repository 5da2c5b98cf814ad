#include "icrm/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace icrm {

GraphonModel::GraphonModel(std::vector<std::vector<double>> grid, double diag_p)
    : k_(grid.size()), diag_p_(diag_p) {
    if (k_ == 0) throw ParameterError("graphon grid must be non-empty");
    check_probability(diag_p, "graphon diag_p");
    w_.reserve(k_ * k_);
    for (const auto& row : grid) {
        if (row.size() != k_) throw ParameterError("graphon grid must be square");
        for (double w : row) {
            check_probability(w, "graphon cell");
            w_.push_back(w);
        }
    }
    for (std::size_t a = 0; a < k_; ++a)
        for (std::size_t b = a + 1; b < k_; ++b)
            if (w_[a * k_ + b] != w_[b * k_ + a]) throw ParameterError("graphon grid must be symmetric");
}

GraphonModel GraphonModel::constant(double p, double diag_p) {
    return GraphonModel({{p}}, diag_p);
}

double GraphonModel::edge_probability(double u, double v) const noexcept {
    const auto a = std::min(k_ - 1, static_cast<std::size_t>(u * static_cast<double>(k_)));
    const auto b = std::min(k_ - 1, static_cast<std::size_t>(v * static_cast<double>(k_)));
    return w_[a * k_ + b];
}

void validate(const InteractionModel& model) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (requires { m.p_J; }) check_probability(m.p_J, "p_J");
            if constexpr (requires { m.p_K; }) check_probability(m.p_K, "p_K");
            if constexpr (std::is_same_v<M, GraphonModel>) check_probability(m.diag_p(), "diag_p");
        },
        model);
}

std::string model_name(const InteractionModel& model) {
    static constexpr const char* kNames[] = {"standard",    "erdos_renyi", "countermonotonic_er",
                                             "er_with_infections", "contagion", "graphon"};
    return kNames[model.index()];
}

std::size_t IndicatorMatrix::count() const noexcept {
    return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), std::uint8_t{1}));
}

IndicatorMatrix sample_indicators(const InteractionModel& model, std::size_t n,
                                  RandomEngine& engine) {
    if (n == 0) throw ParameterError("portfolio size n must be >= 1");
    IndicatorMatrix matrix(n);
    for_each_active_cell(model, n, engine, [&](std::size_t i, std::size_t j) { matrix.set(i, j, 1); });
    return matrix;
}

EdgeProbabilities edge_moment_probabilities(const InteractionModel& model) {
    validate(model);
    EdgeProbabilities e;
    auto set = [&e](CellPair pair, double v) { e.joint[static_cast<std::size_t>(pair)] = v; };
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, StandardModel>) {
                e.p_diag = m.p_J;
            } else if constexpr (std::is_same_v<M, ErdosRenyiModel>) {
                const double p = m.p_K;
                e.p_off = p;
                set(CellPair::o12_o21, p);
                for (auto pair : {CellPair::o12_o13, CellPair::o12_o31, CellPair::o21_o13,
                                  CellPair::o21_o31})
                    set(pair, p * p);
            } else if constexpr (std::is_same_v<M, CountermonotonicErModel>) {
                const double q = 0.5 * m.p_K;
                e.p_off = q;
                for (auto pair : {CellPair::o12_o13, CellPair::o12_o31, CellPair::o21_o13,
                                  CellPair::o21_o31})
                    set(pair, q * q);
            } else if constexpr (std::is_same_v<M, ErWithInfectionsModel>) {
                const double pj = m.p_J;
                const double pk = m.p_K;
                e.p_diag = pj;
                e.p_off = pk;
                set(CellPair::d11_o12, pj * pk);
                set(CellPair::d11_o21, pj * pk);
                set(CellPair::o12_o21, pk);
                for (auto pair : {CellPair::o12_o13, CellPair::o12_o31, CellPair::o21_o13,
                                  CellPair::o21_o31})
                    set(pair, pk * pk);
            } else if constexpr (std::is_same_v<M, ContagionModel>) {
                const double pj = m.p_J;
                const double pk = m.p_K;
                e.p_diag = pj;
                e.p_off = pj * pk;
                set(CellPair::d11_o12, pj * pj * pk);
                set(CellPair::d11_o21, pj * pk);  // shared J_1
                set(CellPair::o12_o21, pj * pj * pk * pk);
                set(CellPair::o12_o13, pj * pj * pk * pk);
                set(CellPair::o12_o31, pj * pj * pk * pk);
                set(CellPair::o21_o13, pj * pj * pk * pk);
                set(CellPair::o21_o31, pj * pk * pk);  // shared J_1
            } else {
                throw UnsupportedAnalytics(
                    "graphon interaction has no closed-form edge moments; use the Monte Carlo "
                    "primitive estimator");
            }
        },
        model);
    return e;
}

}  // namespace icrm
