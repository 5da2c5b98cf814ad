#include "icrm/counting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "icrm/distributions.hpp"
#include "icrm/errors.hpp"

namespace icrm {

TimeChangeTable::TimeChangeTable(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw ParameterError("time-change table needs at least two knots");
    if (knots_.front().first != 0.0 || knots_.front().second != 0.0) {
        throw ParameterError("time-change table must start at (0, 0)");
    }
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (!(knots_[k].first > knots_[k - 1].first)) {
            throw ParameterError("time-change table: t must be strictly increasing");
        }
        if (knots_[k].second < knots_[k - 1].second) {
            throw ParameterError("time-change table: T must be non-decreasing");
        }
    }
}

TimeChangeTable TimeChangeTable::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open time-change table " + path.string());
    std::vector<std::pair<double, double>> knots;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double t;
        double value;
        if (!(fields >> t >> value)) {
            if (first) {
                first = false;
                continue;
            }
            throw ParameterError("time-change table: malformed line '" + line + "'");
        }
        first = false;
        knots.emplace_back(t, value);
    }
    return TimeChangeTable(std::move(knots));
}

double TimeChangeTable::operator()(double t) const {
    if (t < 0.0 || t > knots_.back().first) {
        throw std::out_of_range("time-change table evaluated outside its range");
    }
    auto hi = std::lower_bound(knots_.begin(), knots_.end(), t,
                               [](const auto& knot, double x) { return knot.first < x; });
    if (hi->first == t) return hi->second;
    auto lo = std::prev(hi);
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

RandomTimeChange gamma_scaled_time_change(double shape, double scale) {
    GammaParams params(shape, scale);
    return [params](double t, RandomEngine& engine) { return sample_gamma(params, engine) * t; };
}

void validate(const CountingProcess& process) {
    if (const auto* p = std::get_if<HomogeneousPoisson>(&process)) {
        if (!(p->rate > 0.0)) throw ParameterError("Poisson rate must be positive");
    }
    if (const auto* c = std::get_if<CoxProcess>(&process)) {
        if (!(c->base_rate > 0.0)) throw ParameterError("Cox base rate must be positive");
        if (const auto* f = std::get_if<RandomTimeChange>(&c->time_change); f && !*f) {
            throw ParameterError("Cox process needs a time-change sampler");
        }
    }
}

std::string process_name(const CountingProcess& process) {
    static constexpr const char* kNames[] = {"constant", "poisson", "cox"};
    return kNames[process.index()];
}

namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("time t must be >= 0");
}

double operational_time(const CoxProcess& cox, double t, RandomEngine& engine) {
    if (const auto* table = std::get_if<TimeChangeTable>(&cox.time_change)) return (*table)(t);
    const double s = std::get<RandomTimeChange>(cox.time_change)(t, engine);
    if (!(s >= 0.0)) throw ParameterError("time change returned a negative value");
    return s;
}

// Counts of one rate-`rate` Poisson path read at non-decreasing horizons.
std::vector<std::uint64_t> poisson_path_counts(double rate, std::span<const double> horizons,
                                               RandomEngine& engine) {
    std::vector<std::uint64_t> counts(horizons.size(), 0);
    if (horizons.empty()) return counts;
    double arrival = sample_exponential(engine) / rate;
    std::uint64_t n = 0;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        while (arrival <= horizons[k]) {
            ++n;
            arrival += sample_exponential(engine) / rate;
        }
        counts[k] = n;
    }
    return counts;
}

}  // namespace

std::uint64_t sample_count(const CountingProcess& process, double t, RandomEngine& engine) {
    check_time(t);
    return std::visit(
        [&](const auto& p) -> std::uint64_t {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantCount>) {
                return p.m;
            } else if constexpr (std::is_same_v<P, HomogeneousPoisson>) {
                return sample_poisson(p.rate * t, engine);
            } else {
                return sample_poisson(p.base_rate * operational_time(p, t, engine), engine);
            }
        },
        process);
}

std::vector<std::uint64_t> sample_count_path(const CountingProcess& process,
                                             std::span<const double> times, RandomEngine& engine) {
    for (std::size_t k = 0; k < times.size(); ++k) {
        check_time(times[k]);
        if (k > 0 && times[k] < times[k - 1]) throw ParameterError("path times must be sorted");
    }
    return std::visit(
        [&](const auto& p) -> std::vector<std::uint64_t> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantCount>) {
                return std::vector<std::uint64_t>(times.size(), p.m);
            } else if constexpr (std::is_same_v<P, HomogeneousPoisson>) {
                return poisson_path_counts(p.rate, times, engine);
            } else {
                if (!p.deterministic()) {
                    throw UnsupportedAnalytics("path sampling needs a deterministic time change");
                }
                const auto& table = std::get<TimeChangeTable>(p.time_change);
                std::vector<double> operational(times.size());
                for (std::size_t k = 0; k < times.size(); ++k) operational[k] = table(times[k]);
                return poisson_path_counts(p.base_rate, operational, engine);
            }
        },
        process);
}

std::optional<CountMoments> count_mean_var(const CountingProcess& process, double t) {
    check_time(t);
    return std::visit(
        [&](const auto& p) -> std::optional<CountMoments> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantCount>) {
                return CountMoments{static_cast<double>(p.m), 0.0};
            } else if constexpr (std::is_same_v<P, HomogeneousPoisson>) {
                return CountMoments{p.rate * t, p.rate * t};
            } else {
                if (!p.deterministic()) return std::nullopt;
                const double mean = p.base_rate * std::get<TimeChangeTable>(p.time_change)(t);
                return CountMoments{mean, mean};
            }
        },
        process);
}

std::vector<CountProbability> poisson_pmf(double mean, double truncation_mass) {
    if (!(mean >= 0.0)) throw ParameterError("Poisson mean must be >= 0");
    if (!(truncation_mass > 0.0 && truncation_mass < 1.0)) {
        throw ParameterError("truncation mass must lie in (0, 1)");
    }
    std::vector<CountProbability> pmf;
    if (mean == 0.0) {
        pmf.push_back({0, 1.0});
        return pmf;
    }
    const double log_mean = std::log(mean);
    double cumulative = 0.0;
    for (std::uint64_t m = 0;; ++m) {
        const double md = static_cast<double>(m);
        const double p = std::exp(-mean + md * log_mean - std::lgamma(md + 1.0));
        pmf.push_back({m, p});
        cumulative += p;
        if (cumulative >= 1.0 - truncation_mass) break;
        // Past the mode the terms only shrink; stop once they cannot matter.
        if (md > mean && p < 1e-300) break;
    }
    return pmf;
}

std::vector<CountProbability> count_pmf(const CountingProcess& process, double t,
                                        double truncation_mass) {
    check_time(t);
    return std::visit(
        [&](const auto& p) -> std::vector<CountProbability> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantCount>) {
                return {{p.m, 1.0}};
            } else if constexpr (std::is_same_v<P, HomogeneousPoisson>) {
                return poisson_pmf(p.rate * t, truncation_mass);
            } else {
                if (!p.deterministic()) {
                    throw UnsupportedAnalytics(
                        "count pmf of a Cox process with random time change has no closed form");
                }
                return poisson_pmf(p.base_rate * std::get<TimeChangeTable>(p.time_change)(t),
                                   truncation_mass);
            }
        },
        process);
}

}  // namespace icrm
