#include "icrm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "icrm/errors.hpp"

namespace icrm {

const std::map<std::string, std::string>& default_config_values() {
    static const std::map<std::string, std::string> kDefaults = {
        {"n", "15"},
        {"t", "1"},
        {"seed", "20240601"},
        {"replications", "100000"},
        {"workers", "1"},
        {"out", "."},
        {"interaction.kind", "er_with_infections"},
        {"interaction.p_J", "0.25"},
        {"interaction.p_K", "0.35"},
        {"interaction.graphon", "0.35"},
        {"interaction.diag_p", "0.25"},
        {"severity.kind", "positive_dependent"},
        {"severity.nu", "0.75"},
        {"severity.kappa", "1.75"},
        {"severity.sigma", "1.5"},
        {"severity.sigma_convention", "scale"},
        {"severity.marginal", "gamma_half_normal"},
        {"severity.a", "1"},
        {"severity.b", "0"},
        {"counting.kind", "constant"},
        {"counting.m", "1"},
        {"counting.lambda", "1"},
        {"counting.time_change", "gamma_scaled"},
        {"counting.table", ""},
        {"counting.tc_shape", "1"},
        {"counting.tc_scale", "1"},
        {"counting.time_samples", "10000"},
    };
    return kDefaults;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::map<std::string, std::string>& v, const std::string& key) {
    const std::string& text = v.at(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
    return out;
}

std::uint64_t to_unsigned(const std::map<std::string, std::string>& v, const std::string& key) {
    const std::string& text = v.at(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return out;
}

// "a,b;c,d" -> rows separated by ';', entries by ','.
std::vector<std::vector<double>> parse_grid(const std::string& text) {
    std::vector<std::vector<double>> grid;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<double> values;
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const std::string c = trim(cell);
            double x = 0.0;
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), x);
            if (ec != std::errc() || ptr != c.data() + c.size() || c.empty()) {
                throw ConfigError("interaction.graphon: bad entry '" + c + "'");
            }
            values.push_back(x);
        }
        grid.push_back(std::move(values));
    }
    if (grid.empty()) throw ConfigError("interaction.graphon: empty grid");
    return grid;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::istream& in) {
    const auto& defaults = default_config_values();
    std::map<std::string, std::string> values;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (!defaults.contains(key)) {
            throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

SeverityModel make_severity(const std::string& kind, const SeveritySettings& s) {
    const GammaParams gamma(s.nu, s.kappa);
    const HalfNormalParams shock(s.sigma);
    if (kind == "positive_dependent") return PositiveDependentSeverity{gamma, shock};
    if (kind == "independent") return IndependentVariantSeverity{gamma, shock};
    if (kind == "comonotonic") return ComonotonicSeverity{gamma, 1.0, 0.0};
    if (kind == "iid") return IidSeverity{SeverityMarginal{gamma, shock}};
    throw ConfigError("severity.kind: unknown kind '" + kind + "'");
}

RunConfig build_config(const std::map<std::string, std::string>& overrides,
                       const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.values = default_config_values();
    for (const auto& [k, v] : overrides) {
        if (!cfg.values.contains(k)) throw ConfigError("unknown key '" + k + "'");
        cfg.values[k] = v;
    }
    const auto& v = cfg.values;

    try {
        ModelSpec& spec = cfg.spec;
        spec.n = static_cast<std::size_t>(to_unsigned(v, "n"));
        spec.t = to_double(v, "t");
        spec.master_seed = to_unsigned(v, "seed");
        cfg.replications = to_unsigned(v, "replications");
        cfg.workers = static_cast<unsigned>(to_unsigned(v, "workers"));
        cfg.out_dir = v.at("out");
        cfg.time_samples = to_unsigned(v, "counting.time_samples");
        if (cfg.workers == 0) throw ConfigError("workers must be >= 1");
        if (cfg.replications == 0) throw ConfigError("replications must be >= 1");
        if (cfg.time_samples == 0) throw ConfigError("counting.time_samples must be >= 1");

        const std::string ikind = v.at("interaction.kind");
        const double p_J = to_double(v, "interaction.p_J");
        const double p_K = to_double(v, "interaction.p_K");
        if (ikind == "standard") {
            spec.interaction = StandardModel{p_J};
        } else if (ikind == "erdos_renyi") {
            spec.interaction = ErdosRenyiModel{p_K};
        } else if (ikind == "countermonotonic_er") {
            spec.interaction = CountermonotonicErModel{p_K};
        } else if (ikind == "er_with_infections") {
            spec.interaction = ErWithInfectionsModel{p_J, p_K};
        } else if (ikind == "contagion") {
            spec.interaction = ContagionModel{p_J, p_K};
        } else if (ikind == "graphon") {
            spec.interaction = GraphonModel(parse_grid(v.at("interaction.graphon")),
                                            to_double(v, "interaction.diag_p"));
        } else {
            throw ConfigError("interaction.kind: unknown kind '" + ikind + "'");
        }

        SeveritySettings& s = cfg.severity;
        s.nu = to_double(v, "severity.nu");
        s.kappa = to_double(v, "severity.kappa");
        const double sigma = to_double(v, "severity.sigma");
        const std::string convention = v.at("severity.sigma_convention");
        if (convention == "scale") {
            s.sigma = sigma;
        } else if (convention == "variance") {
            if (sigma < 0.0) throw ConfigError("severity.sigma must be >= 0");
            s.sigma = HalfNormalParams::from_variance(sigma).scale();
        } else {
            throw ConfigError("severity.sigma_convention must be 'scale' or 'variance'");
        }
        const GammaParams gamma(s.nu, s.kappa);
        const HalfNormalParams shock(s.sigma);
        const std::string skind = v.at("severity.kind");
        if (skind == "iid") {
            const std::string marginal = v.at("severity.marginal");
            SeverityMarginal m;
            if (marginal == "gamma_half_normal" || marginal == "gamma") m.gamma = gamma;
            if (marginal == "gamma_half_normal" || marginal == "half_normal") m.half_normal = shock;
            if (!m.gamma && !m.half_normal) {
                throw ConfigError("severity.marginal must be gamma_half_normal, gamma or half_normal");
            }
            spec.severity = IidSeverity{m};
        } else if (skind == "comonotonic") {
            spec.severity = ComonotonicSeverity{gamma, to_double(v, "severity.a"),
                                                to_double(v, "severity.b")};
        } else {
            spec.severity = make_severity(skind, s);
        }

        const std::string ckind = v.at("counting.kind");
        if (ckind == "constant") {
            spec.counting = ConstantCount{to_unsigned(v, "counting.m")};
        } else if (ckind == "poisson") {
            spec.counting = HomogeneousPoisson{to_double(v, "counting.lambda")};
        } else if (ckind == "cox") {
            const double rate = to_double(v, "counting.lambda");
            const std::string change = v.at("counting.time_change");
            if (change == "table") {
                std::filesystem::path table = v.at("counting.table");
                if (table.empty()) throw ConfigError("counting.table is required for a table time change");
                if (table.is_relative()) table = base_dir / table;
                spec.counting = CoxProcess{rate, TimeChangeTable::from_csv(table)};
            } else if (change == "gamma_scaled") {
                spec.counting = CoxProcess{rate, gamma_scaled_time_change(to_double(v, "counting.tc_shape"),
                                                                          to_double(v, "counting.tc_scale"))};
            } else {
                throw ConfigError("counting.time_change must be 'table' or 'gamma_scaled'");
            }
        } else {
            throw ConfigError("counting.kind: unknown kind '" + ckind + "'");
        }
        validate(spec);
    } catch (const ConfigError&) {
        throw;
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return build_config(parse_config_text(in), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace icrm
