#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "icrm/counting.hpp"
#include "icrm/interaction.hpp"
#include "icrm/rng.hpp"
#include "icrm/severity.hpp"

namespace icrm {

/// Means, variances and covariances of corner entries of G = I * Z. Under
/// joint exchangeability these eleven numbers determine Var L_1(n) for every n.
struct CovariancePrimitives {
    double mean_diag = 0.0;     ///< E G(1,1)
    double mean_off = 0.0;      ///< E G(1,2)
    double var_diag = 0.0;      ///< Var G(1,1)
    double cov_diag_row = 0.0;  ///< Cov(G(1,1), G(1,2))
    double cov_diag_col = 0.0;  ///< Cov(G(1,1), G(2,1))
    double var_off = 0.0;       ///< Var G(1,2)
    double cov_sym = 0.0;       ///< Cov(G(1,2), G(2,1))
    double cov_row = 0.0;       ///< Cov(G(1,2), G(1,3))
    double cov_rowcol = 0.0;    ///< Cov(G(1,2), G(3,1))
    double cov_colrow = 0.0;    ///< Cov(G(2,1), G(1,3))
    double cov_col = 0.0;       ///< Cov(G(2,1), G(3,1))

    static constexpr std::size_t kCount = 11;
    [[nodiscard]] std::array<double, kCount> as_array() const noexcept;
    static CovariancePrimitives from_array(const std::array<double, kCount>& v) noexcept;
    static const std::array<const char*, kCount>& names() noexcept;
};

struct PerEventMoments {
    double mean = 0.0;      ///< mu_L(n)
    double variance = 0.0;  ///< sigma^2_L(n)
};

struct TotalMoments {
    double mean = 0.0;      ///< mu_S(n,t)
    double variance = 0.0;  ///< sigma^2_S(n,t)
};

struct MomentSummary {
    double mu_L = 0.0;
    double sigma2_L = 0.0;
    double mu_S = 0.0;
    double sigma2_S = 0.0;
    double tau2 = 0.0;
};

/// Raised when primitives imply a clearly negative variance.
class InconsistentPrimitives : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mean and variance of the loss of one event over n entities. Variances
/// that come out negative only by rounding are clamped to 0.
PerEventMoments per_event_moments(const CovariancePrimitives& prims, std::size_t n);

/// Wald identities for a random sum of i.i.d. event losses.
TotalMoments total_moments(double mu_L, double sigma2_L, double mu_N, double sigma2_N);

/// Coefficient of n^3 in sigma^2_L(n).
double tau_squared(const CovariancePrimitives& prims);

MomentSummary moment_summary(const CovariancePrimitives& prims, std::size_t n,
                             const CountMoments& count);

/// Parameters of the gamma + half-normal severity used by the closed forms.
/// `sigma` is the half-normal scale (standard deviation of the underlying normal).
struct GammaHalfNormal {
    double nu;
    double kappa;
    double sigma;
};

/// Closed-form moments for Erdos-Renyi transmissions with infections and
/// positively dependent severities.
PerEventMoments closed_form_er_with_infections(double p_J, double p_K, const GammaHalfNormal& sev,
                                               std::size_t n);

/// Closed-form moments for the contagion model with positively dependent severities.
PerEventMoments closed_form_contagion(double p_J, double p_K, const GammaHalfNormal& sev,
                                      std::size_t n);

/// Primitives for independent I and Z from edge probabilities and severity
/// moments. Throws UnsupportedAnalytics for graphons.
CovariancePrimitives analytic_primitives(const InteractionModel& interaction,
                                         const SeverityModel& severity);

struct PrimitiveEstimate {
    CovariancePrimitives value;
    CovariancePrimitives standard_error;
    std::uint64_t replications = 0;
};

/// Monte Carlo estimate of the primitives from `reps` independent 3 x 3
/// corners of G. Index-equivalent cells of the corner are pooled; standard
/// errors come from a delete-one-block jackknife over `blocks` blocks.
PrimitiveEstimate estimate_primitives_mc(const InteractionModel& interaction,
                                         const SeverityModel& severity, std::uint64_t reps,
                                         const RngStream& stream, unsigned workers = 1,
                                         std::size_t blocks = 100);

}  // namespace icrm
