#include "icrm/montecarlo.hpp"

#include <utility>

#include "icrm/errors.hpp"
#include "icrm/parallel.hpp"

namespace icrm {

void validate(const ModelSpec& spec) {
    if (spec.n == 0) throw ParameterError("portfolio size n must be >= 1");
    if (!(spec.t >= 0.0)) throw ParameterError("time t must be >= 0");
    validate(spec.interaction);
    validate(spec.severity);
    validate(spec.counting);
}

EventLoss simulate_event_loss(std::size_t n, const InteractionModel& interaction,
                              const SeverityModel& severity, const RngStream& stream,
                              bool keep_matrix) {
    if (n == 0) throw ParameterError("portfolio size n must be >= 1");
    RandomEngine i_engine(stream.child(0));
    RandomEngine z_engine(stream.child(1));
    SeveritySampler z(severity, n, z_engine);

    EventLoss out;
    if (keep_matrix) out.G.emplace(n * n, 0.0);
    for_each_active_cell(interaction, n, i_engine, [&](std::size_t i, std::size_t j) {
        const double g = z(i, j);
        out.L += g;
        ++out.claims;
        if (out.G) (*out.G)[i * n + j] = g;
    });
    return out;
}

namespace {

std::uint64_t draw_event_count(const ModelSpec& spec, const RngStream& rep) {
    RandomEngine engine(rep.child(0));
    return sample_count(spec.counting, spec.t, engine);
}

}  // namespace

ReplicationResult simulate_total(const ModelSpec& spec, std::uint64_t replication,
                                 bool per_entity) {
    const RngStream rep = RngStream(spec.master_seed).child(replication);
    ReplicationResult out;
    out.N = draw_event_count(spec, rep);
    if (per_entity) out.Y.emplace(spec.n, 0.0);

    for (std::uint64_t k = 0; k < out.N; ++k) {
        const RngStream event = rep.child(1 + k);
        RandomEngine i_engine(event.child(0));
        RandomEngine z_engine(event.child(1));
        SeveritySampler z(spec.severity, spec.n, z_engine);
        double L = 0.0;
        for_each_active_cell(spec.interaction, spec.n, i_engine, [&](std::size_t i, std::size_t j) {
            const double g = z(i, j);
            L += g;
            ++out.M;
            if (out.Y) (*out.Y)[i] += g;
        });
        out.S += L;
    }
    return out;
}

ReplicationResult simulate_collective_equivalent(const ModelSpec& spec, std::uint64_t replication) {
    if (!has_independent_cells(spec.severity)) {
        throw PreconditionError(
            "the collective-model equivalence needs i.i.d. severities; the configured severity "
            "model shares components within columns");
    }
    const RngStream rep = RngStream(spec.master_seed).child(replication);
    ReplicationResult out;
    out.N = draw_event_count(spec, rep);

    for (std::uint64_t k = 0; k < out.N; ++k) {
        RandomEngine i_engine(rep.child(1 + k).child(0));
        std::uint64_t claims = 0;
        for_each_active_cell(spec.interaction, spec.n, i_engine,
                             [&](std::size_t, std::size_t) { ++claims; });
        out.M += claims;
    }
    // Severities live on a branch no event uses.
    RandomEngine z_engine(rep.child(0).child(1));
    SeveritySampler z(spec.severity, spec.n, z_engine);
    for (std::uint64_t c = 0; c < out.M; ++c) out.S += z.fresh_marginal();
    return out;
}

void SimulationSample::add(ReplicationResult r) {
    moments_.add(r.S);
    draws_.push_back(std::move(r));
}

void SimulationSample::merge(SimulationSample other) {
    moments_.merge(other.moments_);
    draws_.insert(draws_.end(), std::make_move_iterator(other.draws_.begin()),
                  std::make_move_iterator(other.draws_.end()));
}

std::vector<double> SimulationSample::totals() const {
    std::vector<double> out;
    out.reserve(draws_.size());
    for (const auto& d : draws_) out.push_back(d.S);
    return out;
}

std::vector<std::uint64_t> SimulationSample::claim_counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(draws_.size());
    for (const auto& d : draws_) out.push_back(d.M);
    return out;
}

SimulationSample run_monte_carlo(const ModelSpec& spec, std::uint64_t replications,
                                 unsigned workers, bool per_entity, Simulator simulator) {
    validate(spec);
    if (replications == 0) throw ParameterError("replications must be >= 1");
    if (simulator == Simulator::collective_equivalent && !has_independent_cells(spec.severity)) {
        throw PreconditionError("the collective-model equivalence needs i.i.d. severities");
    }

    std::vector<ReplicationResult> results(replications);
    parallel_chunks(replications, 256, workers, [&](std::uint64_t first, std::uint64_t last, std::uint64_t) {
        for (std::uint64_t r = first; r < last; ++r) {
            results[r] = simulator == Simulator::native ? simulate_total(spec, r, per_entity)
                                                        : simulate_collective_equivalent(spec, r);
        }
    });

    SimulationSample sample;
    for (auto& r : results) sample.add(std::move(r));
    return sample;
}

}  // namespace icrm
