#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icrm/approx.hpp"
#include "icrm/config.hpp"
#include "icrm/moments.hpp"

namespace icrm {

/// Output file could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Exact mean and variance of L and S for the configured model. Graphons use Monte Carlo
/// primitives; Cox processes with a random time change use sampled N(t) moments.
MomentSummary compute_moments(const RunConfig& cfg);

/// Approximation named by `theorem` (thm2, thm3, thm4, thm4b, thm4b-cox).
/// Throws PreconditionError when the counting process does not fit.
AsymptoticDistribution build_approximation(const RunConfig& cfg, const std::string& theorem);

void cmd_moments(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_approx(const RunConfig& cfg, const std::string& theorem, const std::vector<double>& probs,
                std::ostream& out);

struct TablesOptions {
    std::vector<std::size_t> sizes{15, 50, 200};
    bool asymptotic_only = false;
};
void cmd_tables(const RunConfig& cfg, const TablesOptions& options, std::ostream& out);

struct ValidateOptions {
    std::string scenario = "thm2";  ///< thm2, thm3 or thm4b
    std::size_t points = 200;
};

struct ValidationStage {
    std::size_t n;
    double t;
    double ks;
};

std::vector<ValidationStage> cmd_validate(const RunConfig& cfg, const ValidateOptions& options,
                                          std::ostream& out);

/// The (n, t) stages of a named validation scenario.
std::vector<std::pair<std::size_t, double>> scenario_stages(const std::string& scenario);

/// Returns true when every check passes.
bool cmd_equivalence(const RunConfig& cfg, std::ostream& out);

}  // namespace icrm
