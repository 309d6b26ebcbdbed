#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "parvex/csvio.hpp"
#include "parvex/run.hpp"
#include "support.hpp"

using namespace parvex;

namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& tag) {
    const std::string dir = (fs::temp_directory_path() / ("parvex_test_" + tag)).string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");

    testsupport::Rng rng(271);
    for (int rep = 0; rep < 2000; ++rep) {
        double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-30.0, 30.0));
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("config parsing") {
    SUBCASE("well-formed fixture") {
        const RunConfig rc = load_run_config(fixture("power_sign.json"));
        CHECK(rc.problem.p0 == 3.0);
        CHECK(rc.problem.s == 1.0);
        CHECK(rc.problem.mesh->space_node_count() == 33);
        CHECK(rc.problem.h_is_zero == false);
        CHECK(rc.seed == 42);
        CHECK(rc.solver.scheme == SolverConfig::Scheme::ImexLagged);
        // separable sin profile evaluates as expected
        CHECK(rc.problem.g({0.5, 0.0}, 0.0) == doctest::Approx(0.2));
    }
    SUBCASE("malformed variant name is a structural error") {
        CHECK_THROWS_AS(load_run_config(fixture("malformed.json")), StructuralError);
    }
    SUBCASE("echo is normalized and reparses to the same document") {
        const RunConfig rc = load_run_config(fixture("power_sign.json"));
        const RunConfig rc2 = load_run_config(fixture("power_sign.json"));
        CHECK(rc.echo.dump(2) == rc2.echo.dump(2));
    }
    SUBCASE("field expression kinds") {
        const MeshPtr mesh = std::make_shared<Mesh>(Mesh::line(1.0, 5).with_time(1.0, 4));
        const FieldExpr affine = parse_field_expr(
            Json{{"kind", "affine"}, {"c0", 1.0}, {"cx", 2.0}, {"ct", -1.0}}, mesh);
        CHECK(affine.fn({0.25, 0.0}, 0.5) == doctest::Approx(1.0 + 0.5 - 0.5));
        const FieldExpr sep = parse_field_expr(
            Json{{"kind", "separable"},
                 {"x", Json{{"kind", "sinpi"}, {"amplitude", 2.0}, {"frequency", 1.0}}},
                 {"t", Json{{"kind", "affine"}, {"offset", 1.0}, {"slope", 1.0}}}},
            mesh);
        CHECK(sep.fn({0.5, 0.0}, 1.0) == doctest::Approx(4.0));
        CHECK(parse_field_expr(Json(3.5), mesh).fn({0.0, 0.0}, 0.0) == 3.5);
        CHECK_THROWS_AS(parse_field_expr(Json{{"kind", "nope"}}, mesh), StructuralError);
    }
}

TEST_CASE("csv field loaders") {
    const MeshPtr mesh = std::make_shared<Mesh>(Mesh::line(1.0, 5));
    const std::string dir = temp_dir("csv");

    SUBCASE("node-indexed layout") {
        std::string csv = "node,value\n";
        for (int i = 0; i < 5; ++i) csv += std::to_string(i) + "," + format_double(0.5 * i) + "\n";
        write_text_file(dir + "/f.csv", csv);
        const GridFunction u = load_grid_function_csv(mesh, dir + "/f.csv");
        CHECK(u[3] == doctest::Approx(1.5));
    }
    SUBCASE("coordinate layout snaps to the nearest node") {
        std::string csv = "x,value\n";
        for (int i = 0; i < 5; ++i)
            csv += format_double(0.25 * i + 0.01) + "," + format_double(1.0 * i) + "\n";
        write_text_file(dir + "/g.csv", csv);
        const GridFunction u = load_grid_function_csv(mesh, dir + "/g.csv");
        CHECK(u[2] == doctest::Approx(2.0));
    }
    SUBCASE("exponent CSV with inf markers") {
        write_text_file(dir + "/p.csv", "node,value\n0,2\n1,2.5\n2,inf\n3,2.5\n4,2\n");
        const ExponentField p = load_exponent_field_csv(mesh, dir + "/p.csv");
        CHECK(p.is_infinite(2));
        CHECK(p.upper_bound() == doctest::Approx(2.5));
    }
    SUBCASE("incomplete coverage is rejected") {
        write_text_file(dir + "/bad.csv", "node,value\n0,1\n");
        CHECK_THROWS_AS(load_grid_function_csv(mesh, dir + "/bad.csv"), StructuralError);
    }
}

TEST_CASE("validate command contract") {
    SUBCASE("well-formed power_sign spec passes") {
        const RunConfig rc = load_run_config(fixture("power_sign.json"));
        CHECK(run_validate(rc, {"thm31"}, temp_dir("val_ok")) == kExitOk);
    }
    SUBCASE("s = p0 - 1 fails the existence profile") {
        const RunConfig rc = load_run_config(fixture("boundary_s.json"));
        CHECK(run_validate(rc, {"thm31"}, temp_dir("val_bad")) == kExitValidationFailure);
    }
    SUBCASE("decay profile on a compliant homogeneous config") {
        RunConfig rc = load_run_config(fixture("power_sign.json"));
        Json cfg = rc.raw;
        cfg["problem"]["h"] = "zero";
        rc = parse_run_config(cfg);
        CHECK(run_validate(rc, {"thm41"}, temp_dir("val_decay")) == kExitOk);
    }
    SUBCASE("offset nonlinearity: subcritical profile passes, main profile fails") {
        // only the upper growth inequality gates thm32; the lower one fails
        // for this variant at negative tau and must sink thm31
        Json cfg = load_run_config(fixture("power_sign.json")).raw;
        cfg["problem"]["nonlinearity"] = Json{{"variant", "power_abs_plus_offset"}};
        const RunConfig rc = parse_run_config(cfg);
        CHECK(run_validate(rc, {"thm32"}, temp_dir("val_sub_ok")) == kExitOk);
        CHECK(run_validate(rc, {"thm31"}, temp_dir("val_sub_bad")) == kExitValidationFailure);
    }
    SUBCASE("report file carries worst-sample coordinates") {
        const RunConfig rc = load_run_config(fixture("power_sign.json"));
        const std::string dir = temp_dir("val_report");
        run_validate(rc, {"thm31", "thm32"}, dir);
        Json report;
        std::ifstream in(dir + "/validator_report.json");
        in >> report;
        CHECK(report.contains("growth"));
        CHECK(report["growth"].contains("worst_lower_sample"));
        CHECK(report["growth"]["worst_lower_sample"].contains("tau"));
        CHECK(report.contains("existence"));
        CHECK(report.contains("subcritical"));
    }
}

TEST_CASE("solve command emits deterministic artifacts") {
    const RunConfig rc = load_run_config(fixture("power_sign.json"));
    const std::string dir_a = temp_dir("solve_a");
    const std::string dir_b = temp_dir("solve_b");
    CHECK(run_solve(rc, dir_a) == kExitOk);
    CHECK(run_solve(rc, dir_b) == kExitOk);

    for (const char* name : {"trajectory.csv", "summary.csv", "verdict.json", "config_echo.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir_a + "/" + name));
        CHECK(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name));
    }

    // h = 0 run: the summary's y column is identically zero
    RunConfig hz = rc;
    Json cfg = rc.raw;
    cfg["problem"]["h"] = "zero";
    hz = parse_run_config(cfg);
    const std::string dir_c = temp_dir("solve_zero");
    CHECK(run_solve(hz, dir_c) == kExitOk);
    const CsvTable summary = read_csv(dir_c + "/summary.csv");
    CHECK(summary.header.at(1) == "y");
    for (const auto& row : summary.rows) CHECK(row.at(1) == 0.0);
}

TEST_CASE("solve with a manufactured reference reports the error column") {
    Json cfg = load_run_config(fixture("power_sign.json")).raw;
    cfg["problem"]["p0"] = 2.0;
    cfg["problem"]["nonlinearity"] =
        Json{{"variant", "tabulated"}, {"tau", Json::array({-1e6, 1e6})},
             {"values", Json::array({0.0, 0.0})}};
    cfg["problem"]["g"] = 0.0;
    // u* = t sin(pi x): source h = (1 + pi^2 t) sin(pi x)
    cfg["problem"]["h"] =
        Json{{"kind", "separable"},
             {"x", Json{{"kind", "sinpi"}, {"amplitude", 1.0}, {"frequency", 1.0}}},
             {"t", Json{{"kind", "affine"}, {"offset", 1.0}, {"slope", M_PI * M_PI}}}};
    cfg["reference"] =
        Json{{"kind", "separable"},
             {"x", Json{{"kind", "sinpi"}, {"amplitude", 1.0}, {"frequency", 1.0}}},
             {"t", Json{{"kind", "affine"}, {"offset", 0.0}, {"slope", 1.0}}}};
    cfg["solver"]["dt"] = 0.005;
    cfg["problem"]["mesh"]["nodes"] = Json::array({65});

    const RunConfig rc = parse_run_config(cfg);
    const std::string dir = temp_dir("solve_ref");
    CHECK(run_solve(rc, dir) == kExitOk);
    const CsvTable summary = read_csv(dir + "/summary.csv");
    CHECK(summary.header.back() == "l2_error");
    // the discrete solution tracks the manufactured one
    CHECK(summary.rows.back().back() <= 5e-3);

    Json verdict;
    std::ifstream in(dir + "/verdict.json");
    in >> verdict;
    CHECK(verdict["reference_error_l2"].get<double>() <= 5e-3);
}

TEST_CASE("norms command") {
    const RunConfig rc = load_run_config(fixture("power_sign.json"));
    const std::string dir = temp_dir("norms");

    // constant unit field on the spatial mesh: Luxemburg norm 1 on |Omega| = 1
    std::string csv = "node,value\n";
    for (int i = 0; i < rc.problem.mesh->space_node_count(); ++i)
        csv += std::to_string(i) + ",1\n";
    write_text_file(dir + "/ones.csv", csv);
    CHECK(run_norms(rc, dir + "/ones.csv", dir) == kExitOk);

    Json out;
    std::ifstream in(dir + "/norms.json");
    in >> out;
    CHECK(out["domain"] == "space");
    CHECK(out["luxemburg_alpha"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out["l2"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out["modular_alpha"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    // zero field: every norm is zero
    std::string zeros = "node,value\n";
    for (int i = 0; i < rc.problem.mesh->space_node_count(); ++i)
        zeros += std::to_string(i) + ",0\n";
    write_text_file(dir + "/zeros.csv", zeros);
    run_norms(rc, dir + "/zeros.csv", dir);
    std::ifstream in2(dir + "/norms.json");
    in2 >> out;
    CHECK(out["luxemburg_alpha"].get<double>() == 0.0);
    CHECK(out["pn_0_2"].get<double>() == 0.0);
}

TEST_CASE("solver aborts surface as exit code 3 with partial artifacts") {
    Json cfg = load_run_config(fixture("power_sign.json")).raw;
    cfg["problem"]["h"] = 10.0;
    cfg["solver"]["scheme"] = "implicit_newton";
    cfg["solver"]["dt"] = 0.5;
    cfg["solver"]["max_nonlinear_iterations"] = 1;
    cfg["solver"]["nonlinear_tol"] = 1e-16;
    const RunConfig rc = parse_run_config(cfg);
    const std::string dir = temp_dir("abort");
    CHECK(run_solve(rc, dir) == kExitSolverAbort);
    Json verdict;
    std::ifstream in(dir + "/verdict.json");
    in >> verdict;
    CHECK(verdict["aborted"].get<bool>());
    CHECK(!verdict["abort_reason"].get<std::string>().empty());
    CHECK(fs::exists(dir + "/trajectory.csv")); // partial trajectory retained
}

TEST_CASE("research-mode initial state through the config") {
    Json cfg = load_run_config(fixture("power_sign.json")).raw;
    cfg["problem"]["h"] = "zero";
    cfg["solver"]["initial"] =
        Json{{"kind", "separable"},
             {"x", Json{{"kind", "sinpi"}, {"amplitude", 1.0}, {"frequency", 1.0}}}};
    const RunConfig rc = parse_run_config(cfg);
    REQUIRE(rc.solver.initial_state.has_value());
    CHECK(rc.solver.initial_state->is_admissible());
    const std::string dir = temp_dir("initial");
    CHECK(run_solve(rc, dir) == kExitOk);
    const CsvTable summary = read_csv(dir + "/summary.csv");
    CHECK(summary.rows.front().at(1) > 0.0);                      // y(0) > 0
    CHECK(summary.rows.back().at(1) < summary.rows.front().at(1)); // decays
    // gronwall_bound column populated by the decay check
    CHECK(summary.header.at(7) == "gronwall_bound");
    CHECK(summary.rows.back().at(7) > 0.0);
}

TEST_CASE("norms command reproduces the piecewise-exponent oracle value") {
    // 2-node mesh: dual cells of measure 1/2 with alpha = (2, 3) from CSV
    // (the CSV expression context is the space-time mesh: 2 nodes x 3 levels)
    const std::string dir = temp_dir("norms_pw");
    write_text_file(dir + "/alpha.csv",
                    "node,value\n0,2\n1,3\n2,2\n3,3\n4,2\n5,3\n");
    write_text_file(dir + "/ones.csv", "node,value\n0,1\n1,1\n");

    Json cfg;
    cfg["problem"] = Json{
        {"mesh", Json{{"extent", Json::array({1.0})}, {"nodes", Json::array({2})},
                      {"time_samples", 2}}},
        {"T", 1.0},
        {"p0", 3.0},
        {"alpha", Json{{"expr", Json{{"kind", "csv"}, {"path", dir + "/alpha.csv"}}},
                       {"lower", 2.0},
                       {"upper", 3.0}}},
        {"nonlinearity", Json{{"variant", "power_sign"}}}};
    const RunConfig rc = parse_run_config(cfg);
    CHECK(run_norms(rc, dir + "/ones.csv", dir) == kExitOk);

    const double oracle = testsupport::bisect_decreasing(
        [](double l) { return 0.5 / (l * l) + 0.5 / (l * l * l) - 1.0; }, 1e-6, 10.0);
    Json out;
    std::ifstream in(dir + "/norms.json");
    in >> out;
    CHECK(std::abs(out["luxemburg_alpha"].get<double>() - oracle) <= 1e-10);
}

TEST_CASE("sweep command fans out runs and aggregates a summary") {
    Json cfg = load_run_config(fixture("power_sign.json")).raw;
    cfg["sweep"] = Json::array(
        {Json{{"path", "solver.dt"}, {"values", Json::array({0.1, 0.05, 0.025})}}});
    const RunConfig rc = parse_run_config(cfg);
    const std::string dir = temp_dir("sweep");
    CHECK(run_sweep(rc, dir) == kExitOk);
    const std::string summary = slurp(dir + "/sweep_summary.csv");
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 4); // header + 3 runs
    CHECK(summary.find("solver.dt") != std::string::npos);
    for (int run = 0; run < 3; ++run) {
        char name[32];
        std::snprintf(name, sizeof(name), "run_%03d", run);
        CHECK(summary.find(name) != std::string::npos);
        CHECK(fs::exists(dir + "/" + std::string(name) + "/summary.csv"));
    }
}
