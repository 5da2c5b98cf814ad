#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "icrm/counting.hpp"
#include "icrm/interaction.hpp"
#include "icrm/rng.hpp"
#include "icrm/severity.hpp"
#include "icrm/stats.hpp"

namespace icrm {

struct ModelSpec {
    std::size_t n = 1;
    double t = 1.0;
    InteractionModel interaction = StandardModel{0.0};
    SeverityModel severity = IidSeverity{};
    CountingProcess counting = ConstantCount{1};
    std::uint64_t master_seed = 0;
};

void validate(const ModelSpec& spec);

struct EventLoss {
    double L = 0.0;
    std::uint64_t claims = 0;
    /// n x n row-major G, only when requested.
    std::optional<std::vector<double>> G;
};

/// One loss event: I from stream.child(0), Z from stream.child(1). Only
/// active cells draw a severity.
EventLoss simulate_event_loss(std::size_t n, const InteractionModel& interaction,
                              const SeverityModel& severity, const RngStream& stream,
                              bool keep_matrix = false);

struct ReplicationResult {
    double S = 0.0;
    std::uint64_t M = 0;
    std::uint64_t N = 0;
    std::optional<std::vector<double>> Y;
};

/// Stream layout for replication r: R = root.child(r); N(t) from R.child(0);
/// event k (0-based) from R.child(1 + k).
ReplicationResult simulate_total(const ModelSpec& spec, std::uint64_t replication,
                                 bool per_entity = false);

/// Collective model with the same claim count: draws N(t) and the indicator
/// arrays exactly as simulate_total does, then replaces the severities by
/// M i.i.d. draws from the cell marginal. Throws PreconditionError unless the
/// severity cells are i.i.d.
ReplicationResult simulate_collective_equivalent(const ModelSpec& spec, std::uint64_t replication);

class SimulationSample {
public:
    void add(ReplicationResult r);
    /// Appends `other`; moments merge exactly, draws keep their order.
    void merge(SimulationSample other);

    [[nodiscard]] const std::vector<ReplicationResult>& draws() const noexcept { return draws_; }
    [[nodiscard]] std::uint64_t replications() const noexcept { return draws_.size(); }
    [[nodiscard]] const RunningMoments& moments() const noexcept { return moments_; }
    [[nodiscard]] std::vector<double> totals() const;
    [[nodiscard]] std::vector<std::uint64_t> claim_counts() const;

private:
    std::vector<ReplicationResult> draws_;
    RunningMoments moments_;
};

enum class Simulator { native, collective_equivalent };

/// Replications 0..reps-1; draws are ordered by replication index, and the
/// result does not depend on `workers`.
SimulationSample run_monte_carlo(const ModelSpec& spec, std::uint64_t replications,
                                 unsigned workers = 1, bool per_entity = false,
                                 Simulator simulator = Simulator::native);

}  // namespace icrm
