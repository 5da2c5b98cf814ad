#include <doctest.h>

#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "icrm/commands.hpp"
#include "icrm/config.hpp"

using namespace icrm;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    fs::path dir;
};

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("icrm_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Run run_cli(const std::string& name, const std::string& args) {
    const auto dir = scratch(name);
    const std::string cmd = std::string(ICRM_CLI_PATH) + " --out " + dir.string() + " " + args +
                            " > " + (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, dir};
}

int run_raw(const std::string& args) {
    const std::string cmd = std::string(ICRM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("config text parsing") {
    std::istringstream in("# study\nn = 50\n\ninteraction.kind = contagion  # trailing\n");
    const auto v = parse_config_text(in);
    CHECK(v.at("n") == "50");
    CHECK(v.at("interaction.kind") == "contagion");

    std::istringstream unknown("colour = blue\n");
    CHECK_THROWS_AS(parse_config_text(unknown), ConfigError);
    std::istringstream malformed("n 50\n");
    CHECK_THROWS_AS(parse_config_text(malformed), ConfigError);
}

TEST_CASE("config defaults and errors") {
    const auto cfg = build_config({});
    CHECK(cfg.spec.n == 15);
    CHECK(std::holds_alternative<ErWithInfectionsModel>(cfg.spec.interaction));
    CHECK(std::holds_alternative<PositiveDependentSeverity>(cfg.spec.severity));
    CHECK(std::holds_alternative<ConstantCount>(cfg.spec.counting));
    CHECK(cfg.severity.sigma == 1.5);
    CHECK(cfg.replications == 100000);

    const auto variance = build_config({{"severity.sigma_convention", "variance"}});
    CHECK(variance.severity.sigma == doctest::Approx(std::sqrt(1.5)));

    CHECK_THROWS_AS(build_config({{"n", "fifteen"}}), ConfigError);
    CHECK_THROWS_AS(build_config({{"n", "0"}}), ConfigError);
    CHECK_THROWS_AS(build_config({{"interaction.p_J", "1.5"}}), ConfigError);
    CHECK_THROWS_AS(build_config({{"interaction.kind", "lattice"}}), ConfigError);
    CHECK_THROWS_AS(build_config({{"counting.kind", "cox"}, {"counting.time_change", "table"},
                                  {"counting.table", "/nonexistent/table.csv"}}),
                    ConfigError);
}

TEST_CASE("number formatting reads back exactly") {
    for (double x : {0.0, 1.0, 193.84551234567, 1e-300, 35080.38924003608, -2.5}) {
        const auto s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("moments command") {
    auto r = run_cli("moments", "moments");
    REQUIRE(r.code == 0);
    auto rows = read_csv(r.dir / "moments.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"n", "t", "mu_L", "sigma2_L", "mu_S", "sigma2_S", "tau2"});
    CHECK(num(rows[1][2]) == doctest::Approx(193.8455).epsilon(1e-6));

    r = run_cli("moments_zero", "--set interaction.kind=standard --set interaction.p_J=0 moments");
    REQUIRE(r.code == 0);
    rows = read_csv(r.dir / "moments.csv");
    for (std::size_t k = 2; k < rows[1].size(); ++k) CHECK(num(rows[1][k]) == 0.0);

    r = run_cli("moments_contagion", "--set interaction.kind=contagion --set n=50 moments");
    REQUIRE(r.code == 0);
    rows = read_csv(r.dir / "moments.csv");
    CHECK(std::round(num(rows[1][2]) * 10.0) / 10.0 == doctest::Approx(569.3));
}

TEST_CASE("simulate command") {
    auto r = run_cli("simulate_small", "--reps 3 --seed 5 simulate");
    REQUIRE(r.code == 0);
    const auto rows = read_csv(r.dir / "draws.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"replication", "S", "M", "N"});
    const auto summary = read_csv(r.dir / "summary.csv");
    REQUIRE(summary.size() == 2);
    CHECK(summary[1][0] == "3");

    const std::string args = "--reps 2000 --seed 77 --set counting.kind=poisson simulate";
    const auto a = run_cli("simulate_a", args);
    const auto b = run_cli("simulate_b", args);
    const auto c = run_cli("simulate_c", "--workers 4 " + args);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    REQUIRE(c.code == 0);
    CHECK(slurp(a.dir / "draws.csv") == slurp(b.dir / "draws.csv"));
    CHECK(slurp(a.dir / "draws.csv") == slurp(c.dir / "draws.csv"));
    CHECK(slurp(a.dir / "summary.csv") == slurp(c.dir / "summary.csv"));
    CHECK(slurp(a.dir / "draws.csv") != slurp(run_cli("simulate_d", "--reps 2000 --seed 78 "
                                                                     "--set counting.kind=poisson simulate")
                                                      .dir /
                                              "draws.csv"));
}

TEST_CASE("approx command") {
    auto r = run_cli("approx_er200", "--set n=200 approx --theorem thm2 --probs 0.5,0.995");
    REQUIRE(r.code == 0);
    auto rows = read_csv(r.dir / "quantiles.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"theorem", "p", "quantile"});
    CHECK(std::round(num(rows[1][2]) * 10.0) / 10.0 == doctest::Approx(35080.4));

    // the median of the single normal is exactly mu_L
    const auto cfg = build_config({});
    const auto m = compute_moments(cfg);
    CHECK(quantile(build_approximation(cfg, "thm2"), 0.5) == doctest::Approx(m.mu_L).epsilon(1e-12));

    r = run_cli("approx_thm4b",
                "--set interaction.kind=contagion --set n=10 --set t=80 --set counting.kind=poisson "
                "approx --theorem thm4b --probs 0.1,0.5,0.9,0.99");
    REQUIRE(r.code == 0);
    rows = read_csv(r.dir / "quantiles.csv");
    REQUIRE(rows.size() == 5);
    for (std::size_t k = 2; k < rows.size(); ++k) {
        CHECK(std::isfinite(num(rows[k][2])));
        CHECK(num(rows[k][2]) > num(rows[k - 1][2]));
    }

    CHECK(run_cli("approx_bad", "approx --theorem thm4b").code == kExitConfig);
    CHECK(run_cli("approx_bad_p", "approx --theorem thm2 --probs 1.5").code == kExitConfig);
}

TEST_CASE("tables command, analytic rows") {
    const auto r = run_cli("tables", "tables --asymptotic-only");
    REQUIRE(r.code == 0);
    for (const char* name : {"table1.csv", "table2.csv"}) {
        const auto rows = read_csv(r.dir / name);
        REQUIRE(rows.size() == 1 + 3 * 3);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i][2] == "asymptotic");
            for (std::size_t k = 0; k < 3; ++k)
                CHECK(num(rows[i][7 + k]) == num(rows[i][4 + k]) - num(rows[i][3]));
        }
    }
    const auto t1 = read_csv(r.dir / "table1.csv");
    CHECK(t1[1][0] == "15");
    CHECK(t1[1][1] == "dependent");
    CHECK(std::round(num(t1[1][3]) * 10.0) / 10.0 == doctest::Approx(193.8));
}

TEST_CASE("validate command") {
    const auto r = run_cli("validate", "--reps 500 validate --scenario thm4b --points 20");
    REQUIRE(r.code == 0);
    const auto ks = read_csv(r.dir / "ks.csv");
    REQUIRE(ks.size() == 4);
    const auto pp = read_csv(r.dir / "pp.csv");
    REQUIRE(pp.size() > 1);
    for (std::size_t i = 1; i < pp.size(); ++i) {
        for (std::size_t k = 3; k < 5; ++k) {
            CHECK(num(pp[i][k]) >= 0.0);
            CHECK(num(pp[i][k]) <= 1.0);
        }
    }
    CHECK(fs::exists(r.dir / "qq.csv"));
    CHECK(run_cli("validate_bad", "validate --scenario thm9").code == kExitConfig);
}

TEST_CASE("equivalence command preconditions") {
    // positive dependent severities share a column factor: the equivalence does not apply
    const auto r = run_cli("equivalence_dep", "--reps 100 equivalence");
    CHECK(r.code == kExitConfig);
    CHECK_FALSE(slurp(r.dir / "stderr.txt").empty());
}

TEST_CASE("exit codes") {
    CHECK(run_raw("--set bogus=1 moments") == kExitConfig);
    CHECK(run_raw("--config /nonexistent/run.cfg moments") == kExitConfig);
    CHECK(run_raw("--set n=-3 moments") == kExitConfig);
    CHECK(run_raw("frobnicate") == kExitConfig);
    CHECK(run_raw("--out /proc/icrm_no_such_dir moments") == kExitIo);

    // a config file with a relative time-change table
    const auto dir = scratch("config_file");
    {
        std::ofstream table(dir / "tc.csv");
        table << "t,T\n0,0\n10,20\n";
        std::ofstream cfg(dir / "run.cfg");
        cfg << "n = 5\ncounting.kind = cox\ncounting.time_change = table\ncounting.table = tc.csv\n";
    }
    CHECK(run_raw("--config " + (dir / "run.cfg").string() + " --out " + dir.string() + " moments") == 0);
    const auto rows = read_csv(dir / "moments.csv");
    REQUIRE(rows.size() == 2);
    // T(1) = 2 so E N(1) = 2
    CHECK(num(rows[1][4]) == doctest::Approx(2.0 * num(rows[1][2])));
}
