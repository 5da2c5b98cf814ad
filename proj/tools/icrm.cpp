// Command-line front end: moments | simulate | approx | tables | validate | equivalence.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icrm/commands.hpp"
#include "icrm/config.hpp"
#include "icrm/errors.hpp"

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::vector<std::string> set;
};

icrm::RunConfig resolve_config(const GlobalFlags& g) {
    std::map<std::string, std::string> values;
    std::filesystem::path base = ".";
    if (!g.config.empty()) {
        std::ifstream in(g.config);
        if (!in) throw icrm::ConfigError("cannot read config file " + g.config);
        values = icrm::parse_config_text(in);
        const auto parent = std::filesystem::path(g.config).parent_path();
        if (!parent.empty()) base = parent;
    }
    for (const auto& kv : g.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw icrm::ConfigError("--set expects key=value, got '" + kv + "'");
        std::istringstream line(kv);
        try {
            for (const auto& [k, v] : icrm::parse_config_text(line)) values[k] = v;
        } catch (const icrm::ConfigError& e) {
            // drop the "line 1" prefix
            const std::string what = e.what();
            throw icrm::ConfigError("--set " + kv + what.substr(what.find(':')));
        }
    }
    if (g.seed) values["seed"] = std::to_string(*g.seed);
    if (g.reps) values["replications"] = std::to_string(*g.reps);
    if (g.out) values["out"] = *g.out;
    if (g.workers) values["workers"] = std::to_string(*g.workers);
    return icrm::build_config(values, base);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interacting collective risk models: moments, simulation and normal approximations"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--config", g.config, "Config file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--reps", g.reps, "Monte Carlo replications");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--workers", g.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    app.add_option("--set", g.set, "Override one config key, e.g. --set n=50");

    auto* moments = app.add_subcommand("moments", "Exact moments of L and S");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo draws of (S, M, N)");

    auto* approx = app.add_subcommand("approx", "Quantiles of a normal approximation");
    std::string theorem = "thm2";
    std::vector<double> probs{0.5, 0.75, 0.95, 0.995};
    approx->add_option("--theorem", theorem, "thm2 | thm3 | thm4 | thm4b | thm4b-cox")
        ->check(CLI::IsMember({"thm2", "thm3", "thm4", "thm4b", "thm4b-cox"}));
    approx->add_option("--probs", probs, "Probability levels")->delimiter(',');

    auto* tables = app.add_subcommand("tables", "Quantile tables for the two network models");
    icrm::TablesOptions table_options;
    tables->add_flag("--asymptotic-only", table_options.asymptotic_only, "Skip Monte Carlo rows");
    tables->add_option("--sizes", table_options.sizes, "Portfolio sizes")->delimiter(',');

    auto* validate = app.add_subcommand("validate", "KS, P-P and Q-Q data against an approximation");
    icrm::ValidateOptions validate_options;
    validate->add_option("--scenario", validate_options.scenario, "thm2 | thm3 | thm4b")
        ->check(CLI::IsMember({"thm2", "thm3", "thm4b"}));
    validate->add_option("--points", validate_options.points, "Points per P-P/Q-Q curve");

    auto* equivalence = app.add_subcommand("equivalence", "Compare with the collective model");

    for (auto* sub : {moments, simulate, approx, tables, validate, equivalence}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return icrm::kExitConfig;
    }

    try {
        const auto cfg = resolve_config(g);
        if (moments->parsed()) icrm::cmd_moments(cfg, std::cout);
        if (simulate->parsed()) icrm::cmd_simulate(cfg, std::cout);
        if (approx->parsed()) icrm::cmd_approx(cfg, theorem, probs, std::cout);
        if (tables->parsed()) icrm::cmd_tables(cfg, table_options, std::cout);
        if (validate->parsed()) icrm::cmd_validate(cfg, validate_options, std::cout);
        if (equivalence->parsed()) {
            const bool ok = icrm::cmd_equivalence(cfg, std::cout);
            std::cout << (ok ? "all checks passed\n" : "some checks failed\n");
        }
    } catch (const icrm::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return icrm::kExitIo;
    } catch (const icrm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return icrm::kExitConfig;
    } catch (const icrm::PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << '\n';
        return icrm::kExitConfig;
    } catch (const icrm::UnsupportedAnalytics& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return icrm::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return icrm::kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return icrm::kExitConfig;
    }
    return icrm::kExitOk;
}
