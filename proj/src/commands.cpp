#include "icrm/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "icrm/errors.hpp"
#include "icrm/montecarlo.hpp"
#include "icrm/stats.hpp"

namespace icrm {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

namespace {

// Branches of the master seed used by commands that need extra randomness.
enum SeedBranch : std::uint64_t {
    kPrimitivesBranch = 0x7072696d,
    kTimeChangeBranch = 0x74696d65,
    kTablesBranch = 0x7461626c,
    kValidateBranch = 0x76616c69,
    kCollectiveBranch = 0x636f6c6c,
    kBootstrapBranch = 0x626f6f74,
};

const std::vector<double> kTableProbs{0.5, 0.75, 0.95, 0.995};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing " + path.string());
}

std::string join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    return line + '\n';
}

double config_double(const RunConfig& cfg, const std::string& key) {
    const std::string& text = cfg.values.at(key);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

std::vector<double> sample_time_changes(const RunConfig& cfg, const CoxProcess& cox) {
    if (const auto* table = std::get_if<TimeChangeTable>(&cox.time_change)) {
        return {(*table)(cfg.spec.t)};
    }
    const auto& draw = std::get<RandomTimeChange>(cox.time_change);
    RandomEngine engine(RngStream(cfg.spec.master_seed).child(kTimeChangeBranch));
    std::vector<double> out(cfg.time_samples);
    for (auto& s : out) s = draw(cfg.spec.t, engine);
    return out;
}

CountMoments count_moments(const RunConfig& cfg) {
    if (auto exact = count_mean_var(cfg.spec.counting, cfg.spec.t)) return *exact;
    const auto& cox = std::get<CoxProcess>(cfg.spec.counting);
    RunningMoments m;
    for (double s : sample_time_changes(cfg, cox)) m.add(s);
    const double rate = cox.base_rate;
    return {rate * m.mean(), rate * m.mean() + rate * rate * m.variance()};
}

CovariancePrimitives primitives_for(const RunConfig& cfg) {
    if (std::holds_alternative<GraphonModel>(cfg.spec.interaction)) {
        return estimate_primitives_mc(cfg.spec.interaction, cfg.spec.severity, cfg.replications,
                                      RngStream(cfg.spec.master_seed).child(kPrimitivesBranch),
                                      cfg.workers)
            .value;
    }
    return analytic_primitives(cfg.spec.interaction, cfg.spec.severity);
}

std::vector<std::string> quantile_fields(const std::vector<double>& q) {
    std::vector<std::string> out;
    for (double x : q) out.push_back(format_number(x));
    for (std::size_t k = 1; k < q.size(); ++k) out.push_back(format_number(q[k] - q[0]));
    return out;
}

}  // namespace

MomentSummary compute_moments(const RunConfig& cfg) {
    return moment_summary(primitives_for(cfg), cfg.spec.n, count_moments(cfg));
}

AsymptoticDistribution build_approximation(const RunConfig& cfg, const std::string& theorem) {
    const auto prims = primitives_for(cfg);
    const auto event = per_event_moments(prims, cfg.spec.n);
    const auto& counting = cfg.spec.counting;

    if (theorem == "thm2" || theorem == "thm3" || theorem == "thm4") {
        if (const auto* cox = std::get_if<CoxProcess>(&counting); cox && !cox->deterministic()) {
            throw PreconditionError(theorem +
                                    " needs the count distribution; for a random time change use "
                                    "thm4b-cox");
        }
        const auto pmf = count_pmf(counting, cfg.spec.t);
        return build_thm2_mixture(pmf, event.mean, event.variance);
    }
    if (theorem == "thm4b") {
        const auto* poisson = std::get_if<HomogeneousPoisson>(&counting);
        if (!poisson) throw PreconditionError("thm4b needs counting.kind = poisson");
        if (!(cfg.spec.t > 0.0)) throw PreconditionError("thm4b needs t > 0");
        return build_thm4b_normal(poisson->rate, cfg.spec.t, event.mean, event.variance);
    }
    if (theorem == "thm4b-cox") {
        const auto* cox = std::get_if<CoxProcess>(&counting);
        if (!cox) throw PreconditionError("thm4b-cox needs counting.kind = cox");
        return build_thm4b_cox(sample_time_changes(cfg, *cox), cox->base_rate, event.mean,
                               event.variance);
    }
    throw ConfigError("unknown theorem '" + theorem +
                      "' (expected thm2, thm3, thm4, thm4b or thm4b-cox)");
}

void cmd_moments(const RunConfig& cfg, std::ostream& out) {
    const auto m = compute_moments(cfg);
    std::string csv = "n,t,mu_L,sigma2_L,mu_S,sigma2_S,tau2\n";
    csv += join({std::to_string(cfg.spec.n), format_number(cfg.spec.t), format_number(m.mu_L),
                 format_number(m.sigma2_L), format_number(m.mu_S), format_number(m.sigma2_S),
                 format_number(m.tau2)});
    write_file(cfg.out_dir / "moments.csv", csv);
    out << csv;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const auto sample = run_monte_carlo(cfg.spec, cfg.replications, cfg.workers);

    std::string draws = "replication,S,M,N\n";
    for (std::size_t r = 0; r < sample.draws().size(); ++r) {
        const auto& d = sample.draws()[r];
        draws += join({std::to_string(r), format_number(d.S), std::to_string(d.M),
                       std::to_string(d.N)});
    }
    write_file(cfg.out_dir / "draws.csv", draws);

    const EmpiricalSample e(sample.totals());
    std::vector<double> q;
    for (double p : kTableProbs) q.push_back(empirical_quantile(e, p));
    std::string summary = "replications,mean,variance,q0.5,q0.75,q0.95,q0.995\n";
    summary += join({std::to_string(sample.replications()), format_number(sample.moments().mean()),
                     format_number(sample.moments().variance()), format_number(q[0]),
                     format_number(q[1]), format_number(q[2]), format_number(q[3])});
    write_file(cfg.out_dir / "summary.csv", summary);
    out << summary;
}

void cmd_approx(const RunConfig& cfg, const std::string& theorem, const std::vector<double>& probs,
                std::ostream& out) {
    const auto dist = build_approximation(cfg, theorem);
    std::string csv = "theorem,p,quantile\n";
    for (double p : probs) {
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("probabilities must lie in (0, 1)");
        csv += join({theorem, format_number(p), format_number(quantile(dist, p))});
    }
    write_file(cfg.out_dir / "quantiles.csv", csv);
    out << csv;
}

void cmd_tables(const RunConfig& cfg, const TablesOptions& options, std::ostream& out) {
    const double p_J = config_double(cfg, "interaction.p_J");
    const double p_K = config_double(cfg, "interaction.p_K");
    const SeverityModel dependent = make_severity("positive_dependent", cfg.severity);
    const SeverityModel independent = make_severity("independent", cfg.severity);

    // The standard case keeps the dependent severities; with one cell per column they act i.i.d.
    struct Case {
        const char* name;
        const SeverityModel* severity;
    };
    const Case cases[] = {
        {"dependent", &dependent}, {"independent", &independent}, {"standard", &dependent}};
    const char* header =
        "n,case,method,q0.5,q0.75,q0.95,q0.995,d0.75,d0.95,d0.995\n";

    for (std::uint64_t table = 0; table < 2; ++table) {
        const InteractionModel network = table == 0 ? InteractionModel{ErWithInfectionsModel{p_J, p_K}}
                                                    : InteractionModel{ContagionModel{p_J, p_K}};
        std::string csv = header;
        for (std::size_t ni = 0; ni < options.sizes.size(); ++ni) {
            const std::size_t n = options.sizes[ni];
            for (std::uint64_t c = 0; c < 3; ++c) {
                ModelSpec spec;
                spec.n = n;
                spec.t = 1.0;
                spec.interaction = c == 2 ? InteractionModel{StandardModel{p_J}} : network;
                spec.severity = *cases[c].severity;
                spec.counting = ConstantCount{1};
                spec.master_seed = RngStream(cfg.spec.master_seed)
                                       .child(kTablesBranch)
                                       .child(table)
                                       .child(c)
                                       .child(n)
                                       .key();

                if (!options.asymptotic_only) {
                    const auto sample = run_monte_carlo(spec, cfg.replications, cfg.workers);
                    const EmpiricalSample e(sample.totals());
                    std::vector<double> q;
                    for (double p : kTableProbs) q.push_back(empirical_quantile(e, p));
                    auto fields = quantile_fields(q);
                    fields.insert(fields.begin(), {std::to_string(n), cases[c].name, "monte_carlo"});
                    csv += join(fields);
                }

                const auto event =
                    per_event_moments(analytic_primitives(spec.interaction, spec.severity), n);
                const CountProbability one{1, 1.0};
                const auto dist = build_thm2_mixture({&one, 1}, event.mean, event.variance);
                std::vector<double> q;
                for (double p : kTableProbs) q.push_back(quantile(dist, p));
                auto fields = quantile_fields(q);
                fields.insert(fields.begin(), {std::to_string(n), cases[c].name, "asymptotic"});
                csv += join(fields);
            }
        }
        const char* name = table == 0 ? "table1.csv" : "table2.csv";
        write_file(cfg.out_dir / name, csv);
        out << "# " << name << (table == 0 ? " (Erdos-Renyi with infections)\n" : " (contagion)\n")
            << csv;
    }
}

std::vector<std::pair<std::size_t, double>> scenario_stages(const std::string& scenario) {
    if (scenario == "thm2") return {{15, 1.0}, {50, 1.0}, {200, 1.0}};
    if (scenario == "thm3") return {{15, 15.0}, {50, 25.0}, {200, 80.0}};
    if (scenario == "thm4b") return {{10, 15.0}, {10, 25.0}, {10, 80.0}};
    throw ConfigError("unknown scenario '" + scenario + "' (expected thm2, thm3 or thm4b)");
}

std::vector<ValidationStage> cmd_validate(const RunConfig& cfg, const ValidateOptions& options,
                                          std::ostream& out) {
    const auto stages = scenario_stages(options.scenario);
    if (options.points == 0) throw ConfigError("points must be >= 1");
    const double rate = config_double(cfg, "counting.lambda");
    if (!(rate > 0.0)) throw ConfigError("counting.lambda must be positive");

    std::string ks_csv = "scenario,n,t,replications,ks\n";
    std::string pp_csv = "scenario,n,t,empirical,model\n";
    std::string qq_csv = "scenario,n,t,p,empirical,model\n";
    std::vector<ValidationStage> result;

    for (std::size_t s = 0; s < stages.size(); ++s) {
        RunConfig stage = cfg;
        stage.spec.n = stages[s].first;
        stage.spec.t = stages[s].second;
        stage.spec.counting = HomogeneousPoisson{rate};
        stage.spec.master_seed = RngStream(cfg.spec.master_seed)
                                     .child(kValidateBranch)
                                     .child(stage.spec.n)
                                     .child(static_cast<std::uint64_t>(stage.spec.t))
                                     .key();

        const auto dist = build_approximation(stage, options.scenario);
        const auto sample = run_monte_carlo(stage.spec, cfg.replications, cfg.workers);
        const EmpiricalSample e(sample.totals());
        const double ks = ks_one_sample(
            e, [&](double x) { return cdf(dist, x); }, [&](double x) { return cdf_left(dist, x); });
        result.push_back({stage.spec.n, stage.spec.t, ks});

        const std::string prefix =
            options.scenario + "," + std::to_string(stage.spec.n) + "," + format_number(stage.spec.t);
        ks_csv += prefix + "," + std::to_string(cfg.replications) + "," + format_number(ks) + "\n";

        const auto pp = pp_points(e, [&](double x) { return cdf(dist, x); });
        const std::size_t size = pp.size();
        const std::size_t points = std::min(options.points, size);
        for (std::size_t k = 1; k <= points; ++k) {
            const std::size_t i = (k * size) / points - 1;
            pp_csv += prefix + "," + format_number(pp[i].empirical) + "," +
                      format_number(pp[i].model) + "\n";
        }
        std::vector<double> probs;
        for (std::size_t k = 0; k < options.points; ++k) {
            probs.push_back((static_cast<double>(k) + 0.5) / static_cast<double>(options.points));
        }
        for (const auto& q : qq_points(e, [&](double p) { return quantile(dist, p); }, probs)) {
            qq_csv += prefix + "," + format_number(q.p) + "," + format_number(q.empirical) + "," +
                      format_number(q.model) + "\n";
        }
    }
    write_file(cfg.out_dir / "ks.csv", ks_csv);
    write_file(cfg.out_dir / "pp.csv", pp_csv);
    write_file(cfg.out_dir / "qq.csv", qq_csv);
    out << ks_csv;
    return result;
}

namespace {

std::vector<double> binomial_pmf(std::uint64_t trials, double p) {
    std::vector<double> pmf(trials + 1);
    for (std::uint64_t k = 0; k <= trials; ++k) {
        const double kd = static_cast<double>(k);
        const double nd = static_cast<double>(trials);
        const double log_choose = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
        if (p == 0.0) {
            pmf[k] = k == 0 ? 1.0 : 0.0;
        } else if (p == 1.0) {
            pmf[k] = k == trials ? 1.0 : 0.0;
        } else {
            pmf[k] = std::exp(log_choose + kd * std::log(p) + (nd - kd) * std::log1p(-p));
        }
    }
    return pmf;
}

}  // namespace

bool cmd_equivalence(const RunConfig& cfg, std::ostream& out) {
    if (!has_independent_cells(cfg.spec.severity)) {
        throw PreconditionError(
            "equivalence needs i.i.d. severities (severity.kind = independent or iid); the "
            "configured severities share a component within each column");
    }
    const auto native = run_monte_carlo(cfg.spec, cfg.replications, cfg.workers);
    ModelSpec collective_spec = cfg.spec;
    collective_spec.master_seed = RngStream(cfg.spec.master_seed).child(kCollectiveBranch).key();
    const auto collective = run_monte_carlo(collective_spec, cfg.replications, cfg.workers, false,
                                            Simulator::collective_equivalent);

    std::string checks = "check,value,threshold,pass\n";
    bool all = true;
    auto record = [&](const std::string& name, double value, double threshold, bool pass) {
        all = all && pass;
        checks += join({name, format_number(value), format_number(threshold), pass ? "1" : "0"});
    };

    const double ks = ks_two_sample(EmpiricalSample(native.totals()), EmpiricalSample(collective.totals()));
    const double ks_crit = ks_two_sample_critical_1pct(native.replications(), collective.replications());
    record("ks_total_loss", ks, ks_crit, ks < ks_crit);

    const auto m_native = native.claim_counts();
    const auto m_collective = collective.claim_counts();
    const auto homogeneity = chi_square_homogeneity(m_native, m_collective);
    record("chi_square_claim_count_p", homogeneity.p_value, 0.01, homogeneity.p_value > 0.01);

    const std::vector<double> grid{0.0, 0.01, 0.1};
    auto pairs = [](const SimulationSample& s) {
        std::vector<std::pair<double, std::uint64_t>> v;
        for (const auto& d : s.draws()) v.emplace_back(d.S, d.M);
        return v;
    };
    const RngStream boot(RngStream(cfg.spec.master_seed).child(kBootstrapBranch));
    const auto lt_native = empirical_laplace(pairs(native), grid, grid, boot.child(0));
    const auto lt_collective = empirical_laplace(pairs(collective), grid, grid, boot.child(1));
    std::string laplace = "u,v,native,native_se,collective,collective_se,z\n";
    double worst = 0.0;
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b < grid.size(); ++b) {
            const double diff = lt_native.value[a][b] - lt_collective.value[a][b];
            const double se = std::hypot(lt_native.standard_error[a][b],
                                         lt_collective.standard_error[a][b]);
            const double z = diff == 0.0 ? 0.0 : std::fabs(diff) / se;
            worst = std::max(worst, z);
            laplace += join({format_number(grid[a]), format_number(grid[b]),
                             format_number(lt_native.value[a][b]),
                             format_number(lt_native.standard_error[a][b]),
                             format_number(lt_collective.value[a][b]),
                             format_number(lt_collective.standard_error[a][b]), format_number(z)});
        }
    }
    record("laplace_max_z", worst, 4.0, worst <= 4.0);

    if (const auto* standard = std::get_if<StandardModel>(&cfg.spec.interaction)) {
        if (const auto* constant = std::get_if<ConstantCount>(&cfg.spec.counting)) {
            const auto pmf = binomial_pmf(constant->m * cfg.spec.n, standard->p_J);
            const auto gof = chi_square_gof(m_native, pmf);
            record("binomial_claim_count_p", gof.p_value, 0.01, gof.p_value > 0.01);
        } else if (const auto* poisson = std::get_if<HomogeneousPoisson>(&cfg.spec.counting);
                   poisson && cfg.spec.n == 1) {
            std::vector<double> pmf;
            for (const auto& [m, w] : poisson_pmf(poisson->rate * cfg.spec.t * standard->p_J, 1e-12)) {
                pmf.push_back(w);
            }
            const auto gof = chi_square_gof(m_native, pmf);
            record("poisson_claim_count_p", gof.p_value, 0.01, gof.p_value > 0.01);
        }
    }

    write_file(cfg.out_dir / "equivalence.csv", checks);
    write_file(cfg.out_dir / "laplace.csv", laplace);
    out << checks;
    return all;
}

}  // namespace icrm
