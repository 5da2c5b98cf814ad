#include "icrm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "icrm/parallel.hpp"

namespace icrm {

std::array<double, CovariancePrimitives::kCount> CovariancePrimitives::as_array() const noexcept {
    return {mean_diag, mean_off, var_diag,   cov_diag_row, cov_diag_col, var_off,
            cov_sym,   cov_row,  cov_rowcol, cov_colrow,   cov_col};
}

CovariancePrimitives CovariancePrimitives::from_array(const std::array<double, kCount>& v) noexcept {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
}

const std::array<const char*, CovariancePrimitives::kCount>& CovariancePrimitives::names() noexcept {
    static const std::array<const char*, kCount> kNames = {
        "mean_diag", "mean_off", "var_diag",   "cov_diag_row", "cov_diag_col", "var_off",
        "cov_sym",   "cov_row",  "cov_rowcol", "cov_colrow",   "cov_col"};
    return kNames;
}

PerEventMoments per_event_moments(const CovariancePrimitives& p, std::size_t n) {
    if (n == 0) throw ParameterError("portfolio size n must be >= 1");
    const double n1 = static_cast<double>(n);
    const double n2 = n1 * (n1 - 1.0);
    const double n3 = n2 * (n1 - 2.0);

    const double single = n1 * p.var_diag;
    const double pair = n2 * (2.0 * p.cov_diag_row + 2.0 * p.cov_diag_col + p.var_off + p.cov_sym);
    const double triple = n3 * tau_squared(p);
    double variance = single + pair + triple;

    const double magnitude = std::fabs(single) + std::fabs(pair) + std::fabs(triple);
    if (variance < 0.0) {
        if (variance < -1e-9 * std::max(1.0, magnitude)) {
            throw InconsistentPrimitives("primitives imply a negative per-event variance (" +
                                         std::to_string(variance) + ")");
        }
        variance = 0.0;
    }
    return {n1 * p.mean_diag + n2 * p.mean_off, variance};
}

TotalMoments total_moments(double mu_L, double sigma2_L, double mu_N, double sigma2_N) {
    if (sigma2_L < 0.0 || sigma2_N < 0.0) throw ParameterError("variances must be non-negative");
    return {mu_N * mu_L, sigma2_N * mu_L * mu_L + mu_N * sigma2_L};
}

double tau_squared(const CovariancePrimitives& p) {
    return p.cov_row + p.cov_rowcol + p.cov_colrow + p.cov_col;
}

MomentSummary moment_summary(const CovariancePrimitives& prims, std::size_t n,
                             const CountMoments& count) {
    const auto event = per_event_moments(prims, n);
    const auto total = total_moments(event.mean, event.variance, count.mean, count.var);
    return {event.mean, event.variance, total.mean, total.variance, tau_squared(prims)};
}

namespace {

struct SeverityTerms {
    double mean;         // nu*kappa + sqrt(2 sigma^2 / pi)
    double second;       // E Z^2 = nu kappa^2 + nu^2 kappa^2 + 2 nu kappa sqrt(2 sigma^2/pi) + sigma^2
    double shared;       // E Z(1,2) Z(3,2) with a shared gamma component
    double gamma_var;    // nu kappa^2
};

SeverityTerms severity_terms(const GammaHalfNormal& s) {
    const double shock_mean = std::sqrt(2.0 * s.sigma * s.sigma / std::numbers::pi);
    const double nk = s.nu * s.kappa;
    const double nk2 = s.nu * s.kappa * s.kappa;
    const double mean = nk + shock_mean;
    const double second = nk2 + nk * nk + 2.0 * nk * shock_mean + s.sigma * s.sigma;
    const double shared = nk2 + nk * nk + 2.0 * nk * shock_mean + shock_mean * shock_mean;
    return {mean, second, shared, nk2};
}

}  // namespace

PerEventMoments closed_form_er_with_infections(double p_J, double p_K, const GammaHalfNormal& sev,
                                               std::size_t n) {
    const auto z = severity_terms(sev);
    const double n1 = static_cast<double>(n);
    const double n2 = n1 * (n1 - 1.0);
    const double n3 = n2 * (n1 - 2.0);
    const double m2 = z.mean * z.mean;

    const double mean = n1 * p_J * z.mean + n2 * p_K * z.mean;
    const double variance = n1 * (p_J * z.second - p_J * p_J * m2) +
                            n2 * (p_K * z.second - p_K * p_K * m2 + 2.0 * p_J * p_K * z.gamma_var +
                                  (p_K - p_K * p_K) * m2) +
                            n3 * p_K * p_K * z.gamma_var;
    return {mean, variance};
}

PerEventMoments closed_form_contagion(double p_J, double p_K, const GammaHalfNormal& sev,
                                      std::size_t n) {
    const auto z = severity_terms(sev);
    const double n1 = static_cast<double>(n);
    const double n2 = n1 * (n1 - 1.0);
    const double n3 = n2 * (n1 - 2.0);
    const double m2 = z.mean * z.mean;

    const double mean = n1 * p_J * z.mean + n2 * p_J * p_K * z.mean;
    const double variance =
        n1 * (p_J * z.second - p_J * p_J * m2) +
        n2 * (p_J * p_K * z.second - p_J * p_J * p_K * p_K * m2 + 2.0 * p_J * p_K * z.shared -
              2.0 * p_J * p_J * p_K * m2) +
        n3 * (p_J * p_K * p_K * z.shared - p_J * p_J * p_K * p_K * m2);
    return {mean, variance};
}

CovariancePrimitives analytic_primitives(const InteractionModel& interaction,
                                         const SeverityModel& severity) {
    const EdgeProbabilities e = edge_moment_probabilities(interaction);
    const SeverityMoments z = severity_moments(severity);

    const double m2 = z.mean * z.mean;          // E Z_a Z_b, different columns
    const double same_cell = z.var + m2;        // E Z_a^2
    const double same_column = z.within_column_cov + m2;

    CovariancePrimitives p;
    p.mean_diag = e.p_diag * z.mean;
    p.mean_off = e.p_off * z.mean;
    const double dd = p.mean_diag * p.mean_off;
    const double oo = p.mean_off * p.mean_off;

    p.var_diag = e.p_diag * same_cell - p.mean_diag * p.mean_diag;
    p.var_off = e.p_off * same_cell - oo;
    p.cov_diag_row = e[CellPair::d11_o12] * m2 - dd;
    p.cov_diag_col = e[CellPair::d11_o21] * same_column - dd;
    p.cov_sym = e[CellPair::o12_o21] * m2 - oo;
    p.cov_row = e[CellPair::o12_o13] * m2 - oo;
    p.cov_rowcol = e[CellPair::o12_o31] * m2 - oo;
    p.cov_colrow = e[CellPair::o21_o13] * m2 - oo;
    p.cov_col = e[CellPair::o21_o31] * same_column - oo;
    return p;
}

namespace {

// Per-replication products averaged over index-equivalent cells of a 3 x 3 corner.
constexpr std::size_t kStatCount = 11;
using CornerStats = std::array<double, kStatCount>;

CornerStats corner_statistics(const IndicatorMatrix& I, const SeverityMatrix& Z) {
    double g[3][3];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g[i][j] = I(i, j) ? Z(i, j) : 0.0;

    CornerStats s{};
    for (int a = 0; a < 3; ++a) {
        s[0] += g[a][a] / 3.0;
        s[2] += g[a][a] * g[a][a] / 3.0;
        for (int b = 0; b < 3; ++b) {
            if (b == a) continue;
            s[1] += g[a][b] / 6.0;
            s[3] += g[a][b] * g[a][b] / 6.0;
            s[4] += g[a][a] * g[a][b] / 6.0;
            s[5] += g[a][a] * g[b][a] / 6.0;
            if (b > a) s[6] += g[a][b] * g[b][a] / 3.0;
            const int c = 3 - a - b;
            s[8] += g[a][b] * g[c][a] / 6.0;
            s[9] += g[b][a] * g[a][c] / 6.0;
            if (b < c) {
                s[7] += g[a][b] * g[a][c] / 3.0;
                s[10] += g[b][a] * g[c][a] / 3.0;
            }
        }
    }
    return s;
}

CovariancePrimitives primitives_from_means(const CornerStats& e) {
    CovariancePrimitives p;
    p.mean_diag = e[0];
    p.mean_off = e[1];
    const double dd = e[0] * e[1];
    const double oo = e[1] * e[1];
    p.var_diag = e[2] - e[0] * e[0];
    p.var_off = e[3] - oo;
    p.cov_diag_row = e[4] - dd;
    p.cov_diag_col = e[5] - dd;
    p.cov_sym = e[6] - oo;
    p.cov_row = e[7] - oo;
    p.cov_rowcol = e[8] - oo;
    p.cov_colrow = e[9] - oo;
    p.cov_col = e[10] - oo;
    return p;
}

}  // namespace

PrimitiveEstimate estimate_primitives_mc(const InteractionModel& interaction,
                                         const SeverityModel& severity, std::uint64_t reps,
                                         const RngStream& stream, unsigned workers,
                                         std::size_t blocks) {
    validate(interaction);
    validate(severity);
    if (reps < 2) throw ParameterError("need at least two replications");
    blocks = static_cast<std::size_t>(std::clamp<std::uint64_t>(blocks, 2, reps));

    // Block b holds replications [b*reps/blocks, (b+1)*reps/blocks).
    std::vector<CornerStats> block_sums(blocks, CornerStats{});
    parallel_chunks(blocks, 1, workers, [&](std::uint64_t first, std::uint64_t, std::uint64_t) {
        const std::uint64_t lo = first * reps / blocks;
        const std::uint64_t hi = (first + 1) * reps / blocks;
        CornerStats acc{};
        for (std::uint64_t r = lo; r < hi; ++r) {
            const RngStream rep = stream.child(r);
            RandomEngine i_engine(rep.child(0));
            RandomEngine z_engine(rep.child(1));
            const auto I = sample_indicators(interaction, 3, i_engine);
            const auto Z = sample_severities(severity, 3, z_engine);
            const auto s = corner_statistics(I, Z);
            for (std::size_t k = 0; k < kStatCount; ++k) acc[k] += s[k];
        }
        block_sums[first] = acc;
    });

    CornerStats total{};
    for (const auto& b : block_sums)
        for (std::size_t k = 0; k < kStatCount; ++k) total[k] += b[k];

    PrimitiveEstimate out;
    out.replications = reps;
    CornerStats mean{};
    for (std::size_t k = 0; k < kStatCount; ++k) mean[k] = total[k] / static_cast<double>(reps);
    out.value = primitives_from_means(mean);

    std::vector<std::array<double, CovariancePrimitives::kCount>> leave_out(blocks);
    std::array<double, CovariancePrimitives::kCount> centre{};
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::uint64_t size = (b + 1) * reps / blocks - b * reps / blocks;
        CornerStats m{};
        for (std::size_t k = 0; k < kStatCount; ++k)
            m[k] = (total[k] - block_sums[b][k]) / static_cast<double>(reps - size);
        leave_out[b] = primitives_from_means(m).as_array();
        for (std::size_t k = 0; k < centre.size(); ++k) centre[k] += leave_out[b][k] / blocks;
    }
    std::array<double, CovariancePrimitives::kCount> se{};
    for (std::size_t k = 0; k < se.size(); ++k) {
        double ss = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) ss += (leave_out[b][k] - centre[k]) * (leave_out[b][k] - centre[k]);
        se[k] = std::sqrt(ss * static_cast<double>(blocks - 1) / static_cast<double>(blocks));
    }
    out.standard_error = CovariancePrimitives::from_array(se);
    return out;
}

}  // namespace icrm
