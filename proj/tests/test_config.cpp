#include <doctest.h>

#include <sstream>

#include "tauq/experiments.hpp"

using namespace tauq;

namespace {

const char* kGood = R"({
  "preset": "sin-mass",
  "tau": 0.5,
  "t": 0.3,
  "grid": {"min": -10.0, "max": 10.0, "points": 257},
  "n_sweep": [4, 1, 2],
  "mc": {"paths": 2000, "steps": 8, "seed": 42},
  "levy": [{"y": 1.0, "w": 0.5}],
  "out": "result.csv"
})";

std::string patched(const std::string& from, const std::string& to) {
    std::string s = kGood;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("config parsing: happy path") {
    const ExperimentConfig cfg = parse_config(kGood);
    CHECK(cfg.preset == "sin-mass");
    CHECK(cfg.tau == 0.5);
    CHECK(cfg.t == 0.3);
    CHECK(cfg.grid_points == 257);
    CHECK(cfg.n_sweep == std::vector<int>{4, 1, 2});
    CHECK(cfg.mc->paths == 2000);
    CHECK(cfg.mc->seed == 42);
    CHECK(cfg.levy.size() == 1);
    CHECK(cfg.out == "result.csv");
    CHECK(cfg.build_symbol().levy.has_value());
    CHECK(cfg.build_grid().size() == 257);
}

TEST_CASE("config parsing: rejections") {
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
    // unknown keys at every level
    CHECK_THROWS_AS(parse_config(patched("\"tau\"", "\"extra\": 1, \"tau\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"min\"", "\"bogus\": 0, \"min\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"seed\"", "\"sead\"")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"w\": 0.5", "\"w\": 0.5, \"z\": 1")), ConfigError);
    // value domain errors
    CHECK_THROWS_AS(parse_config(patched("0.5,", "1.5,")), ConfigError);       // tau
    CHECK_THROWS_AS(parse_config(patched("\"t\": 0.3", "\"t\": 0")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("257", "8")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("[4, 1, 2]", "[]")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("[4, 1, 2]", "[0]")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"paths\": 2000", "\"paths\": 10")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"y\": 1.0", "\"y\": 0.0")), ConfigError);
    CHECK_THROWS_AS(parse_config(patched("\"sin-mass\"", "42")), ConfigError);
    // unknown preset surfaces when the symbol is built
    CHECK_THROWS_AS(parse_config(patched("sin-mass", "no-such")).build_symbol(), ConfigError);
}

TEST_CASE("run_converge: constant coefficients hit the oracle, header is stable") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "constant", "tau": 1.0, "t": 0.5,
      "grid": {"min": -16.0, "max": 16.0, "points": 513},
      "n_sweep": [1, 2, 4]
    })");
    const std::string csv = run_converge(cfg);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,l1_error,l1_norm,wall_ms");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto c1 = line.find(',');
        const double err = std::stod(line.substr(c1 + 1));
        CHECK(err <= 1e-6);
    }
    CHECK(rows == 3);
    CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("run_converge / converge_sweep: variable coefficients self-reference") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "sin-mass", "tau": 0.5, "t": 0.4,
      "grid": {"min": -10.0, "max": 10.0, "points": 385},
      "n_sweep": [4, 16, 32]
    })");
    const ChernoffReport report = converge_sweep(cfg);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].n == 4);
    CHECK(report.rows[1].l1_error < report.rows[0].l1_error);  // error(16) < error(4)
    CHECK(report.rows[2].l1_error == 0.0);                     // finest row is the reference
    for (const auto& row : report.rows) CHECK(row.l1_norm > 0.0);
}

TEST_CASE("run_converge requires a sweep and a wide-enough grid") {
    ExperimentConfig cfg = parse_config(R"({
      "preset": "constant", "tau": 1.0, "t": 0.5,
      "grid": {"min": -16.0, "max": 16.0, "points": 513}
    })");
    CHECK_THROWS_AS(run_converge(cfg), ConfigError);

    const ExperimentConfig narrow = parse_config(R"({
      "preset": "constant", "tau": 1.0, "t": 0.5,
      "grid": {"min": -3.0, "max": 3.0, "points": 64},
      "n_sweep": [1]
    })");
    CHECK_THROWS_AS(run_converge(narrow), ConfigError);
}

TEST_CASE("run_tau_compare: constant coefficients give zero gaps") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "constant", "tau": 0.0, "t": 0.4,
      "grid": {"min": -14.0, "max": 14.0, "points": 385},
      "n_sweep": [1, 4]
    })");
    const std::string csv = run_tau_compare(cfg);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) < 1e-10);
        CHECK(std::stod(line.substr(c2 + 1)) < 1e-10);
    }
}

TEST_CASE("run_tau_compare: transformed gap shrinks with n") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "sin-mass", "tau": 0.0, "t": 0.3,
      "grid": {"min": -10.0, "max": 10.0, "points": 257},
      "n_sweep": [4, 16]
    })");
    const std::string csv = run_tau_compare(cfg);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,gap_tau_pair,gap_transformed");
    double gaps[2][2];
    for (auto& row : gaps) {
        std::string line;
        REQUIRE(std::getline(lines, line));
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        row[0] = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        row[1] = std::stod(line.substr(c2 + 1));
    }
    CHECK(gaps[1][1] < gaps[0][1]);
}

TEST_CASE("run_mc_validate: deterministic bytes, small z-scores, girsanov row policy") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "constant", "tau": 1.0, "t": 0.5,
      "grid": {"min": -14.0, "max": 14.0, "points": 449},
      "mc": {"paths": 4000, "steps": 8, "seed": 7}
    })");
    const std::string a = run_mc_validate(cfg);
    const std::string b = run_mc_validate(cfg);
    CHECK(a == b);
    CHECK(a.find("estimator,mean,stderr,grid_value,z_score") == 0);
    CHECK(a.find("feynman_kac,") != std::string::npos);
    CHECK(a.find("girsanov,") != std::string::npos);

    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const auto last = line.rfind(',');
        CHECK(std::abs(std::stod(line.substr(last + 1))) < 3.0);
    }

    // jump configs skip the girsanov row
    const ExperimentConfig jumpy = parse_config(R"({
      "preset": "constant", "tau": 1.0, "t": 0.5,
      "grid": {"min": -18.0, "max": 18.0, "points": 513},
      "mc": {"paths": 2000, "steps": 8, "seed": 7},
      "levy": [{"y": 1.0, "w": 0.5}]
    })");
    CHECK(run_mc_validate(jumpy).find("girsanov") == std::string::npos);

    ExperimentConfig no_mc = cfg;
    no_mc.mc.reset();
    CHECK_THROWS_AS(run_mc_validate(no_mc), ConfigError);
}

TEST_CASE("run_norm_growth emits the three horizons against the potential bound") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "well", "tau": 0.0, "t": 0.5,
      "grid": {"min": -14.0, "max": 14.0, "points": 385}
    })");
    const std::string csv = run_norm_growth(cfg);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,k_emp,k_hat");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const double k_emp = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double k_hat = std::stod(line.substr(c2 + 1));
        CHECK(k_emp <= k_hat + 1e-3);
    }
    CHECK(rows == 3);
}

TEST_CASE("run_hff_check: n = 1 rows are tight, n > 3 refused") {
    const ExperimentConfig cfg = parse_config(R"({
      "preset": "sin-mass", "tau": 0.5, "t": 0.25,
      "grid": {"min": -10.0, "max": 10.0, "points": 401},
      "n_sweep": [1]
    })");
    const std::string csv = run_hff_check(cfg);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,hff_value,lff_value,abs_diff");
    REQUIRE(std::getline(lines, line));
    const auto last = line.rfind(',');
    CHECK(std::stod(line.substr(last + 1)) < 1e-8);

    const ExperimentConfig big = parse_config(R"({
      "preset": "sin-mass", "tau": 0.5, "t": 0.25,
      "grid": {"min": -10.0, "max": 10.0, "points": 401},
      "n_sweep": [1, 4]
    })");
    CHECK_THROWS_AS(run_hff_check(big), ConfigError);
}
