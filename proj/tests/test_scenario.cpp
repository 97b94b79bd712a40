#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"

using namespace svfix;
using namespace svfix_test;

TEST_CASE("scenario round-trip", "[scenario]") {
    for (const char* name : {"example1", "example2"}) {
        const Scenario s = *builtin_scenario(name);
        const auto emitted = emit_scenario(s);
        const Scenario parsed = parse_scenario(emitted);
        const auto re_emitted = emit_scenario(parsed);
        REQUIRE(emitted.dump() == re_emitted.dump());
    }
}

TEST_CASE("schema violations are reported", "[scenario]") {
    using nlohmann::json;
    REQUIRE_THROWS_AS(parse_scenario(json{{"dimension", 3}}), ScenarioError);
    json incomplete = emit_scenario(builtin_example1());
    incomplete.erase("operator");
    REQUIRE_THROWS_AS(parse_scenario(incomplete), ScenarioError);
    // overlapping pieces with different values are rejected
    json clash = emit_scenario(builtin_example1());
    clash["operator"]["pieces"][1]["if"]["box"][0][0] = 0.005; // overlaps the flat piece
    REQUIRE_THROWS_WITH(parse_scenario(clash),
                        Catch::Matchers::ContainsSubstring("ambiguous overlap"));
}

TEST_CASE("run_scenario dispatch and exit codes", "[scenario]") {
    RunOptions options;

    SECTION("solve example1") {
        const auto out = run_scenario("solve", builtin_example1(), options);
        REQUIRE(out.exit_code == exit_ok);
        REQUIRE(out.report["selection"]["uniform"].get<bool>());
        REQUIRE(out.report["selection"]["xi"].get<double>() == 0.00005);
    }

    SECTION("verify example2 pair") {
        options.xi = Vector(1.0);
        options.eta = Vector(1.00005);
        const auto out = run_scenario("verify", builtin_example2(), options);
        REQUIRE(out.exit_code == exit_ok);
        const auto& cell = out.report["approximation"]["cells"][0];
        REQUIRE(cell["d_pair"].get<double>() == Catch::Approx(0.00005).margin(1e-15));
        REQUIRE(cell["d_ball"].get<double>() == Catch::Approx(0.00005).margin(1e-15));
        REQUIRE(cell["d_inward"].get<double>() == Catch::Approx(0.00005).margin(1e-15));
    }

    SECTION("verify failure exits 2") {
        options.xi = Vector(0.5);
        options.eta = Vector(1.2);
        const auto out = run_scenario("verify", builtin_example2(), options);
        REQUIRE(out.exit_code == exit_verification_failed);
    }

    SECTION("solve with an unreachable default exits 3") {
        Scenario bad = builtin_example1();
        bad.op.domain = ValueSet::interval(0.0, 1.0);
        bad.op.diagonal_default = ValueSet::point(Vector(2.0));
        bad.op.pieces = {OperatorPiece{PiecePredicate::interval(0.0, 1.0, true, true),
                                       PieceValue::constant_set(ValueSet::point(Vector(2.0))),
                                       "base"}};
        bad.omega = OmegaPartition(0.0, 1.0, 4);
        bad.params.oracle_resolution = 1e-3;
        const auto out = run_scenario("solve", bad, options);
        REQUIRE(out.exit_code == exit_no_fixed_point);
    }

    SECTION("unknown command exits 4") {
        const auto out = run_scenario("frobnicate", builtin_example1(), options);
        REQUIRE(out.exit_code == exit_invalid_scenario);
    }

    SECTION("approx without a frame exits 4") {
        const auto out = run_scenario("approx", builtin_example1(), options);
        REQUIRE(out.exit_code == exit_invalid_scenario);
    }
}

TEST_CASE("reports are deterministic modulo timings", "[scenario]") {
    RunOptions options;
    auto a = run_scenario("solve", builtin_example1(), options).report;
    auto b = run_scenario("solve", builtin_example1(), options).report;
    a.erase("timings");
    b.erase("timings");
    REQUIRE(a.dump() == b.dump());
}

TEST_CASE("csv export", "[scenario]") {
    const auto tmp = std::filesystem::temp_directory_path() / "svfix_test_cells.csv";
    RunOptions options;
    options.csv_path = tmp.string();
    options.xi = Vector(1.0);
    options.eta = Vector(1.00005);
    const auto out = run_scenario("verify", builtin_example2(), options);
    REQUIRE(out.exit_code == exit_ok);
    std::ifstream f(tmp);
    std::string header;
    std::getline(f, header);
    REQUIRE(header == "cell_index,omega_rep,xi,eta,residual,d_pair,d_ball,d_inward");
    int rows = 0;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty())
            ++rows;
    REQUIRE(rows == 67); // 64 cells + 3 atoms
    std::filesystem::remove(tmp);
}

TEST_CASE("certify command on the builtin", "[scenario]") {
    RunOptions options;
    const auto out = run_scenario("certify", builtin_example1(), options);
    REQUIRE(out.exit_code == exit_ok);
    REQUIRE(out.report["certificates"]["n0"].get<int>() == 20000);
    REQUIRE(out.report["certificates"]["alsc"].get<std::string>() == "certified");
    REQUIRE(out.report["certificates"]["inverse_closed"].get<bool>());
}

TEST_CASE("shipped scenario file parses and solves", "[scenario]") {
    std::ifstream f(std::string(SVFIX_SCENARIO_DIR) + "/band.json");
    REQUIRE(f.good());
    nlohmann::json j;
    f >> j;
    const Scenario s = parse_scenario(j);
    REQUIRE(s.name == "band");
    RunOptions options;
    const auto out = run_scenario("solve", s, options);
    REQUIRE(out.exit_code == exit_ok);
    // analytic value: the smaller root of x = 0.2 + x^2/10
    const double expected = (1.0 - std::sqrt(1.0 - 0.08)) / 0.2;
    REQUIRE(out.report["selection"]["xi"].get<double>() ==
            Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("verify reproduces a solve report's verdict", "[scenario]") {
    RunOptions options;
    const auto solved = run_scenario("solve", builtin_example1(), options);
    REQUIRE(solved.exit_code == exit_ok);
    RunOptions verify_options;
    verify_options.xi = Vector(solved.report["selection"]["xi"].get<double>());
    const auto verified = run_scenario("verify", builtin_example1(), verify_options);
    REQUIRE(verified.exit_code == exit_ok);
    for (const auto& cell : verified.report["approximation"]["cells"])
        REQUIRE(cell["residual_xi"].get<double>() <= 1e-9);
}
