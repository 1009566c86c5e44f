#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "leafspace/runner.hpp"
#include "leafspace/scenario_io.hpp"

using namespace leafspace;
using nlohmann::json;

TEST_CASE("reports are deterministic for a fixed seed") {
    RunConfig cfg;
    cfg.command = "example";
    cfg.example_name = "wedge";
    cfg.n = 4;
    cfg.seed = 12345;
    RunResult a = run(cfg);
    RunResult b = run(cfg);
    CHECK(a.exit_code == 0);
    CHECK(stable_report(a.report) == stable_report(b.report));
    CHECK(stable_report(a.report).dump() == stable_report(b.report).dump());

    cfg.seed = 999;
    RunResult c = run(cfg);
    CHECK(stable_report(a.report)["config"] != stable_report(c.report)["config"]);
}

TEST_CASE("hausdorff exit codes discriminate the catalog") {
    RunConfig cfg;
    cfg.command = "example";
    cfg.example_name = "wedge";
    cfg.check = "hausdorff";
    cfg.n = 4;
    RunResult pass = run(cfg);
    CHECK(pass.exit_code == 0);
    CHECK(pass.report["verdicts"]["hausdorff"]["pass"] == true);

    cfg.example_name = "wedge_plus_ray";
    RunResult fail_run = run(cfg);
    CHECK(fail_run.exit_code == 1);
    CHECK(fail_run.report["verdicts"]["hausdorff"]["pass"] == false);
    CHECK(fail_run.report["witnesses"].contains("hausdorff_counterexample"));
}

TEST_CASE("recurrence command reports the four members") {
    RunConfig cfg;
    cfg.command = "example";
    cfg.example_name = "full_disc";
    cfg.n = 4;
    cfg.want_recurrence = true;
    cfg.at = polar(1.0, 0.1);
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["residuals"]["recurrence"]["members"].size() == 4);
    CHECK(r.report["verdicts"]["recurrence_oracle"]["pass"] == true);
}

TEST_CASE("invalid inputs exit with code 2") {
    RunConfig cfg;
    cfg.command = "example";
    cfg.example_name = "moebius";
    RunResult bad_name = run(cfg);
    CHECK(bad_name.exit_code == 2);

    cfg.example_name = "wedge";
    cfg.command = "check";
    cfg.check = "nonsense";
    RunResult bad_check = run(cfg);
    CHECK(bad_check.exit_code == 2);

    cfg.check = "hausdorff";
    cfg.at = polar(1.5, 0.1);  // inside the removed wedge
    cfg.command = "recurrence";
    RunResult bad_at = run(cfg);
    CHECK(bad_at.exit_code == 2);
}

TEST_CASE("wedge_plus_ray keeps its orbifold structure despite non-Hausdorffness") {
    RunConfig cfg;
    cfg.command = "check";
    cfg.example_name = "wedge_plus_ray";
    cfg.check = "orbifold";
    cfg.n = 4;
    cfg.sample_count = 10;
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["verdicts"]["orbifold_like"]["pass"] == true);
    CHECK(r.report["verdicts"]["orbifold_like"]["isotropy_at_center"] == 4);
}

TEST_CASE("default example run reports oracle and flatness residuals") {
    RunConfig cfg;
    cfg.command = "example";
    cfg.example_name = "affine_line";
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    // nonabelian algebra flagged against the abelian group model
    CHECK(r.report["residuals"]["flatness_nonabelian_flag"] == true);
    CHECK(r.report["residuals"]["flatness_defect"].get<double>() >= 1.0);

    cfg.example_name = "full_disc";
    RunResult f = run(cfg);
    CHECK(f.exit_code == 0);
    CHECK(f.report["residuals"]["flatness_nonabelian_flag"] == false);
    CHECK(f.report["residuals"]["flatness_defect"].get<double>() <= 1e-6);
    CHECK(f.report["verdicts"]["trajectory_oracle"]["pass"] == true);
}

TEST_CASE("report schema carries budgets and tolerances on every verdict") {
    RunConfig cfg;
    cfg.command = "check";
    cfg.example_name = "wedge";
    cfg.check = "orbifold";
    cfg.sample_count = 8;
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    for (const auto& [name, v] : r.report["verdicts"].items()) {
        CAPTURE(name);
        CHECK(v.contains("pass"));
        CHECK(v.contains("tolerance"));
        CHECK(v.contains("budget"));
    }
    CHECK(r.report.contains("timestamp"));
    CHECK(r.report["budgets"].contains("K"));
}

TEST_CASE("artifacts are written to the output directory") {
    RunConfig cfg;
    cfg.command = "lift";
    cfg.example_name = "wedge";
    cfg.at = polar(1.5, 0.5);
    cfg.path_delta = 0.9;
    cfg.out_dir = "/tmp/leafspace_test_out";
    std::filesystem::remove_all(*cfg.out_dir);
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(*cfg.out_dir + "/report.json"));
    CHECK(std::filesystem::exists(*cfg.out_dir + "/trajectories.csv"));
    CHECK(std::filesystem::exists(*cfg.out_dir + "/leaf_0.csv"));
    // csv rows are t,g...,y...
    std::ifstream csv(*cfg.out_dir + "/trajectories.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 3);  // t, one group coordinate, two point coordinates
}

TEST_CASE("inline scenario files load and run") {
    const char* path = "/tmp/leafspace_inline_scenario.json";
    {
        std::ofstream out(path);
        out << R"({
          "name": "inline_rotation",
          "n": 4,
          "domain": {
            "dimension": 2,
            "container": {"type": "disc", "center": [0.0, 0.0], "radius": 2.0},
            "remove": [{"type": "wedge", "r_min": 1.0, "axis": 0.0, "half_width": 0.25}]
          },
          "fields": [{"poly": [
            [{"exp": [0, 1], "coef": -1.5707963267948966}],
            [{"exp": [1, 0], "coef": 1.5707963267948966}]
          ]}],
          "group": {"k": 1, "lattice_generators": [[1.0]]},
          "budgets": {"K": 8, "B": 10.0, "grid": 6, "samples": 20}
        })";
    }
    Scenario sc = load_scenario(path);
    CHECK(sc.algebra.domain().dimension() == 2);
    CHECK(sc.group.compact());

    // polynomial table reproduces the catalog rotation field
    Scenario cat = make_scenario("wedge", 4);
    Vec x = polar(1.5, 0.4);
    CHECK(distance(sc.algebra.evaluate(Vec{1.0}, x), cat.algebra.evaluate(Vec{1.0}, x)) <= 1e-12);

    RunConfig cfg;
    cfg.command = "recurrence";
    cfg.scenario_file = path;
    cfg.at = polar(1.5, 0.4);
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.report["residuals"]["recurrence"]["members"].size() == 2);
    std::remove(path);
}

TEST_CASE("malformed scenario files are invalid input") {
    const char* path = "/tmp/leafspace_bad_scenario.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    RunConfig cfg;
    cfg.command = "recurrence";
    cfg.scenario_file = path;
    RunResult r = run(cfg);
    CHECK(r.exit_code == 2);
    std::remove(path);
}
