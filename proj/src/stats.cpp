#include "icrm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace icrm {

EmpiricalSample::EmpiricalSample(std::vector<double> draws) : sorted_(std::move(draws)) {
    std::sort(sorted_.begin(), sorted_.end());
}

double empirical_quantile(const EmpiricalSample& sample, double p) {
    if (sample.size() == 0) throw std::invalid_argument("empirical quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level must lie in [0, 1]");
    const auto& x = sample.sorted();
    const double h = static_cast<double>(x.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= x.size()) return x.back();
    const double frac = h - static_cast<double>(lo);
    return x[lo] + frac * (x[lo + 1] - x[lo]);
}

double ks_one_sample(const EmpiricalSample& sample, const CdfFunction& cdf,
                     const CdfFunction& cdf_left) {
    const auto& x = sample.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        const double f = cdf(x[i]);
        const double f_left = cdf_left ? cdf_left(x[i]) : f;
        d = std::max(d, std::fabs(static_cast<double>(j) / n - f));
        d = std::max(d, std::fabs(static_cast<double>(i) / n - f_left));
        i = j;
    }
    return std::min(d, 1.0);
}

double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
    const auto& x = a.sorted();
    const auto& y = b.sorted();
    if (x.empty() || y.empty()) throw std::invalid_argument("two-sample KS needs non-empty samples");
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_one_sample_critical_1pct(std::size_t size) {
    return 1.628 / std::sqrt(static_cast<double>(size));
}

double ks_two_sample_critical_1pct(std::size_t size_a, std::size_t size_b) {
    const double a = static_cast<double>(size_a);
    const double b = static_cast<double>(size_b);
    return 1.628 * std::sqrt((a + b) / (a * b));
}

std::vector<ProbabilityPair> pp_points(const EmpiricalSample& sample, const CdfFunction& cdf) {
    const auto& x = sample.sorted();
    std::vector<ProbabilityPair> out;
    out.reserve(x.size());
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.push_back({static_cast<double>(i + 1) / n, cdf(x[i])});
    }
    return out;
}

std::vector<QuantilePair> qq_points(const EmpiricalSample& sample, const QuantileFunction& quantile,
                                    std::span<const double> probs) {
    std::vector<QuantilePair> out;
    out.reserve(probs.size());
    for (double p : probs) out.push_back({p, empirical_quantile(sample, p), quantile(p)});
    return out;
}

LaplaceGrid empirical_laplace(std::span<const std::pair<double, std::uint64_t>> sample,
                              std::span<const double> u, std::span<const double> v,
                              const RngStream& bootstrap_stream, std::size_t bootstrap) {
    if (sample.empty()) throw std::invalid_argument("Laplace transform of an empty sample");
    for (double x : u)
        if (!(x >= 0.0)) throw std::domain_error("Laplace arguments must be >= 0");
    for (double x : v)
        if (!(x >= 0.0)) throw std::domain_error("Laplace arguments must be >= 0");

    const std::size_t n = sample.size();
    std::vector<std::vector<double>> eu(u.size(), std::vector<double>(n));
    std::vector<std::vector<double>> ev(v.size(), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < u.size(); ++a) eu[a][i] = std::exp(-u[a] * sample[i].first);
        for (std::size_t b = 0; b < v.size(); ++b)
            ev[b][i] = std::exp(-v[b] * static_cast<double>(sample[i].second));
    }

    LaplaceGrid grid;
    grid.u.assign(u.begin(), u.end());
    grid.v.assign(v.begin(), v.end());
    grid.value.assign(u.size(), std::vector<double>(v.size(), 0.0));
    grid.standard_error.assign(u.size(), std::vector<double>(v.size(), 0.0));
    for (std::size_t a = 0; a < u.size(); ++a) {
        for (std::size_t b = 0; b < v.size(); ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += eu[a][i] * ev[b][i];
            grid.value[a][b] = s / static_cast<double>(n);
        }
    }
    if (bootstrap < 2) return grid;

    std::vector<std::vector<RunningMoments>> spread(u.size(), std::vector<RunningMoments>(v.size()));
    std::vector<std::size_t> index(n);
    std::vector<std::vector<double>> sums(u.size(), std::vector<double>(v.size()));
    for (std::size_t rep = 0; rep < bootstrap; ++rep) {
        RandomEngine engine(bootstrap_stream.child(rep));
        for (auto& k : index) {
            k = std::min(n - 1, static_cast<std::size_t>(engine.uniform() * static_cast<double>(n)));
        }
        for (auto& row : sums) std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t k : index) {
            for (std::size_t a = 0; a < u.size(); ++a)
                for (std::size_t b = 0; b < v.size(); ++b) sums[a][b] += eu[a][k] * ev[b][k];
        }
        for (std::size_t a = 0; a < u.size(); ++a)
            for (std::size_t b = 0; b < v.size(); ++b)
                spread[a][b].add(sums[a][b] / static_cast<double>(n));
    }
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = 0; b < v.size(); ++b)
            grid.standard_error[a][b] = std::sqrt(spread[a][b].variance());
    return grid;
}

namespace {

struct Cell {
    double observed_a = 0.0;
    double observed_b = 0.0;
    double expected = 0.0;  // pooling criterion
};

// Merges adjacent cells until each has expected >= 5 (the last short cell joins its neighbour).
std::vector<Cell> pool_cells(const std::vector<Cell>& raw) {
    std::vector<Cell> out;
    Cell acc;
    bool open = false;
    for (const auto& c : raw) {
        acc.observed_a += c.observed_a;
        acc.observed_b += c.observed_b;
        acc.expected += c.expected;
        open = true;
        if (acc.expected >= 5.0) {
            out.push_back(acc);
            acc = Cell{};
            open = false;
        }
    }
    if (open) {
        if (out.empty()) {
            out.push_back(acc);
        } else {
            out.back().observed_a += acc.observed_a;
            out.back().observed_b += acc.observed_b;
            out.back().expected += acc.expected;
        }
    }
    return out;
}

double chi_square_upper(double statistic, std::size_t dof) {
    if (dof == 0) return 1.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> pmf) {
    if (counts.empty()) throw std::invalid_argument("chi-square test of an empty sample");
    if (pmf.empty()) throw std::invalid_argument("chi-square test needs a pmf");
    const double total = static_cast<double>(counts.size());

    std::vector<Cell> raw(pmf.size() + 1);
    double mass = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (pmf[k] < 0.0) throw std::invalid_argument("negative pmf entry");
        raw[k].expected = total * pmf[k];
        mass += pmf[k];
    }
    raw.back().expected = total * std::max(0.0, 1.0 - mass);
    for (auto c : counts) raw[std::min<std::size_t>(c, pmf.size())].observed_a += 1.0;
    if (raw.back().expected == 0.0 && raw.back().observed_a == 0.0) raw.pop_back();

    const auto cells = pool_cells(raw);
    ChiSquareResult r;
    for (const auto& c : cells) {
        if (c.expected > 0.0) {
            r.statistic += (c.observed_a - c.expected) * (c.observed_a - c.expected) / c.expected;
        } else if (c.observed_a > 0.0) {
            r.statistic = INFINITY;
        }
    }
    r.degrees_of_freedom = cells.size() - 1;
    r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_upper(r.statistic, r.degrees_of_freedom);
    return r;
}

ChiSquareResult chi_square_homogeneity(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chi-square test of an empty sample");
    std::uint64_t top = 0;
    for (auto x : a) top = std::max(top, x);
    for (auto x : b) top = std::max(top, x);

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double n = na + nb;
    std::vector<Cell> raw(top + 1);
    for (auto x : a) raw[x].observed_a += 1.0;
    for (auto x : b) raw[x].observed_b += 1.0;
    for (auto& c : raw) c.expected = std::min(na, nb) * (c.observed_a + c.observed_b) / n;
    std::erase_if(raw, [](const Cell& c) { return c.observed_a + c.observed_b == 0.0; });

    const auto cells = pool_cells(raw);
    ChiSquareResult r;
    for (const auto& c : cells) {
        const double t = c.observed_a + c.observed_b;
        const double ea = na * t / n;
        const double eb = nb * t / n;
        r.statistic += (c.observed_a - ea) * (c.observed_a - ea) / ea;
        r.statistic += (c.observed_b - eb) * (c.observed_b - eb) / eb;
    }
    r.degrees_of_freedom = cells.size() - 1;
    r.p_value = chi_square_upper(r.statistic, r.degrees_of_freedom);
    return r;
}

void RunningMoments::add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double RunningMoments::variance() const noexcept {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

}  // namespace icrm
