#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace svfix;
using namespace svfix_test;

TEST_CASE("random_solve reproduces the constant selection", "[driver]") {
    const Scenario ex1 = builtin_example1();
    const auto result = random_solve(ex1.op, ex1.omega, ex1.op.domain, ex1.params);
    REQUIRE(result.selection.uniform);
    REQUIRE(result.selection.uniform_value.x() == 0.00005);
    REQUIRE(result.selection.cells.size() == 64);
    REQUIRE(result.selection.atoms.size() == 3);
    REQUIRE(result.selection.sup_residual == 0.0);
    REQUIRE(result.certificates.n0 == 20000);
    REQUIRE(result.certificates.alsc_certified);
    REQUIRE(result.certificates.inverse_closed);
    REQUIRE(result.selection.measurability.find("simple function") != std::string::npos);
    // residuals are recomputed, not copied: spot-check a few cells
    for (const auto& cell : {result.selection.cells[0], result.selection.cells[40]})
        REQUIRE(residual(ex1.op, cell.omega, cell.xi) == cell.residual);
}

TEST_CASE("omega-independent operator solves like the deterministic case", "[driver]") {
    const RandomOperator c =
        constant_operator(ValueSet::interval(0.2, 0.6), ValueSet::interval(0.0, 1.0));
    SolverParams params;
    const OmegaPartition P(0.0, 1.0, 8, {0.5});
    const auto result = random_solve(c, P, c.domain, params);
    REQUIRE(result.selection.uniform);
    const auto det = solve_fixed_point(FrozenOperator(c, P.representative(0)), c.domain,
                                       result.certificates.n0, params.tol, params.n_max, 2000);
    REQUIRE(det.success);
    REQUIRE(result.selection.uniform_value.x() == det.fixed_point.x());
}

TEST_CASE("empty fixed-point sets are reported per cell", "[driver]") {
    // diagonal default {2} never meets C = [0, 1]
    RandomOperator bad;
    bad.dim = 1;
    bad.domain = ValueSet::interval(0.0, 1.0);
    bad.pieces = {OperatorPiece{PiecePredicate::interval(0.0, 1.0, true, true),
                                PieceValue::constant_set(ValueSet::point(Vector(2.0))), "base"}};
    bad.diagonal_default = ValueSet::point(Vector(2.0));
    SolverParams params;
    params.oracle_resolution = 1e-3;
    REQUIRE_THROWS_WITH(random_solve(bad, OmegaPartition(0.0, 1.0, 4), bad.domain, params),
                        Catch::Matchers::ContainsSubstring("F(omega) empty"));
}

TEST_CASE("refuted hypotheses stop the solve", "[driver]") {
    RandomOperator jump;
    jump.dim = 1;
    jump.domain = ValueSet::interval(0.0, 1.0);
    jump.pieces = {
        OperatorPiece{PiecePredicate::interval(0.0, 0.5, true, true),
                      PieceValue::constant_set(ValueSet::interval(0.3, 0.4)), "low"},
        OperatorPiece{PiecePredicate::interval(0.5, 1.0, false, true),
                      PieceValue::constant_set(ValueSet::interval(0.6, 0.7)), "high"}};
    SolverParams params;
    params.oracle_resolution = 1e-3;
    REQUIRE_THROWS_WITH(random_solve(jump, OmegaPartition(0.0, 1.0, 4), jump.domain, params),
                        Catch::Matchers::ContainsSubstring("a.l.s.c. refuted"));
}

TEST_CASE("fiber miss is reported", "[driver]") {
    // an interior xi that does not belong to the value set cannot be a
    // retraction image
    REQUIRE_THROWS_WITH(
        svfix::detail::recover_eta_1d(Vector(0.5), ValueSet::interval(0.8, 0.9), kBoundaryTol),
        Catch::Matchers::ContainsSubstring("retraction fiber miss"));
}

TEST_CASE("verify_pair on the worked examples", "[driver]") {
    const Scenario ex2 = builtin_example2();
    const auto worked = verify_pair(ex2.op, ex2.omega, Vector(1.0), Vector(1.00005), ex2.params);
    REQUIRE(worked.all_verified);
    REQUIRE(worked.cells.size() == 64);
    REQUIRE(worked.atoms.size() == 3);
    for (const auto* c : worked.all()) {
        REQUIRE(c->d_pair == Catch::Approx(0.00005).margin(1e-15));
        REQUIRE(std::abs(c->d_pair - c->d_ball) <= 1e-12);
        REQUIRE(std::abs(c->d_ball - c->d_inward) <= 1e-12);
        REQUIRE(c->membership);
        REQUIRE(c->retraction);
    }

    const Scenario ex1 = builtin_example1();
    const auto fp = verify_pair(ex1.op, ex1.omega, Vector(0.00005), std::nullopt, ex1.params);
    REQUIRE(fp.all_verified);
    for (const auto* c : fp.all()) {
        REQUIRE(c->residual_xi == 0.0);
        REQUIRE(c->d_pair == 0.0);
    }

    // corrupted pair: retraction relation breaks
    const auto bad = verify_pair(ex2.op, ex2.omega, Vector(0.5), Vector(1.2), ex2.params);
    REQUIRE_FALSE(bad.all_verified);
    REQUIRE_FALSE(bad.cells.front().retraction);
}

TEST_CASE("random_approximation on the worked example", "[driver]") {
    const Scenario ex2 = builtin_example2();
    const auto report = random_approximation(ex2.op, ex2.omega, ex2.params);
    REQUIRE(report.all_verified);
    for (const auto* c : report.all()) {
        REQUIRE(c->membership);
        REQUIRE(c->retraction);
        REQUIRE(std::abs(c->d_pair - c->d_ball) <= 1e-9);
        REQUIRE(std::abs(c->d_ball - c->d_inward) <= 1e-9);
        // the solved pair is an interior fixed point: all three distances 0
        REQUIRE(c->d_pair == 0.0);
        REQUIRE(c->residual_xi <= ex2.params.tol);
    }
}

TEST_CASE("approximation with protruding ball values", "[driver]") {
    // values [1.3, 1.7] on all of B2: retraction sends them to {1}
    RandomOperator T;
    T.dim = 1;
    T.domain = ValueSet::interval(-2.0, 2.0);
    T.pieces = {OperatorPiece{PiecePredicate::interval(-2.0, 2.0, true, true),
                              PieceValue::constant_set(ValueSet::interval(1.3, 1.7)), "ball"}};
    T.frame = UnitBallFrame{};
    const OmegaPartition P(-2.0, 2.0, 8);
    SolverParams params;
    const auto report = random_approximation(T, P, params);
    for (const auto* c : report.all()) {
        REQUIRE(c->xi.x() == 1.0);
        REQUIRE(c->eta.x() == Catch::Approx(1.3).margin(1e-12));
        REQUIRE(c->d_pair == Catch::Approx(0.3).margin(1e-12));
        REQUIRE(c->d_ball == Catch::Approx(0.3).margin(1e-12));
        REQUIRE(c->d_inward == Catch::Approx(0.3).margin(1e-12));
        REQUIRE(c->membership);
        REQUIRE(c->retraction);
        REQUIRE(c->equalities);
    }
    REQUIRE(report.all_verified);
}

TEST_CASE("values inside B1 give a zero-distance report", "[driver]") {
    RandomOperator T;
    T.dim = 1;
    T.domain = ValueSet::interval(-2.0, 2.0);
    T.pieces = {OperatorPiece{PiecePredicate::interval(-2.0, 2.0, true, true),
                              PieceValue::constant_set(ValueSet::interval(-0.3, 0.4)), "inside"}};
    T.frame = UnitBallFrame{};
    const auto report = random_approximation(T, OmegaPartition(-2.0, 2.0, 4), SolverParams{});
    for (const auto* c : report.all()) {
        REQUIRE(c->d_pair == 0.0);
        REQUIRE(c->d_ball == 0.0);
        REQUIRE(c->d_inward == 0.0);
    }
}

TEST_CASE("retract_operator is the exact clamp", "[driver]") {
    const Scenario ex2 = builtin_example2();
    const RandomOperator G = retract_operator(ex2.op);
    for (int i = 0; i <= 400; ++i) {
        const double x = -2.0 + 4.0 * i / 400.0;
        const double w = 0.37; // off-diagonal omega
        const Box tv = bounding_box(evaluate(ex2.op, w, Vector(x)));
        const Box gv = bounding_box(evaluate(G, w, Vector(x)));
        REQUIRE(gv.lo[0] == Catch::Approx(std::clamp(tv.lo[0], -1.0, 1.0)).margin(1e-12));
        REQUIRE(gv.hi[0] == Catch::Approx(std::clamp(tv.hi[0], -1.0, 1.0)).margin(1e-12));
    }
}

TEST_CASE("homotopy_random extracts the limit", "[driver]") {
    const Scenario ex1 = builtin_example1();
    SolverParams params = ex1.params;
    params.tol = 1e-6;
    const auto result =
        homotopy_random(ex1.op, ex1.omega, ValueSet::interval(0.0, 1.0), 64, params);
    REQUIRE(result.premise_certified);
    REQUIRE(result.selection.uniform);
    // the Cauchy point snaps onto the true limit of xi_n = 0.00005 (1 - 1/n)
    REQUIRE(result.selection.uniform_value.x() == 0.00005);
    REQUIRE(result.selection.sup_residual == 0.0);
    for (const auto& cell : result.cells) {
        REQUIRE(cell.max_gap_times_n <= result.diam_c + 1e-12);
        for (const auto& s : cell.steps)
            REQUIRE(std::abs(s.gap - 0.00005 / s.n) <= 1e-12);
    }

    // constant map: the limit is the value itself
    const RandomOperator c =
        constant_operator(ValueSet::point(Vector(0.6)), ValueSet::interval(0.0, 1.0));
    SolverParams cp;
    cp.tol = 1e-2;
    const auto cres = homotopy_random(c, OmegaPartition(0.0, 1.0, 4), c.domain, 256, cp);
    REQUIRE(cres.selection.uniform_value.x() == 0.6);
    REQUIRE(cres.selection.sup_residual == 0.0);

    // an expanding map fails the 1-set-contractive precondition
    RandomOperator expanding;
    expanding.dim = 1;
    expanding.domain = ValueSet::interval(0.0, 1.0);
    expanding.pieces = {OperatorPiece{PiecePredicate::interval(0.0, 1.0, true, true),
                                      PieceValue::moving_point(Quadratic(0.0, 2.0)), "double"}};
    REQUIRE_THROWS_WITH(
        homotopy_random(expanding, OmegaPartition(0.0, 1.0, 2), expanding.domain, 8, cp),
        Catch::Matchers::ContainsSubstring("1-set-contractive"));
}

TEST_CASE("boundary_random outcomes", "[driver]") {
    // values inside the inward closure everywhere: the d = 0 branch
    const Scenario ex2 = builtin_example2();
    const auto fixed =
        boundary_random(ex2.op, ex2.omega, {BoundaryCondition::iii}, ex2.params);
    REQUIRE(fixed.applicable);
    REQUIRE(fixed.selection.sup_residual <= ex2.params.tol);

    // protruding values with condition iv declared: the ray meets the set,
    // no condition holds, theorem inapplicable
    RandomOperator T;
    T.dim = 1;
    T.domain = ValueSet::interval(-2.0, 2.0);
    T.pieces = {OperatorPiece{PiecePredicate::interval(-2.0, 2.0, true, true),
                              PieceValue::constant_set(ValueSet::interval(1.3, 1.7)), "ball"}};
    T.frame = UnitBallFrame{};
    const auto inapplicable =
        boundary_random(T, OmegaPartition(-2.0, 2.0, 4), {BoundaryCondition::iv}, SolverParams{});
    REQUIRE_FALSE(inapplicable.applicable);
    REQUIRE(inapplicable.message.find("inapplicable") != std::string::npos);
    for (const auto& oc : inapplicable.outcomes) {
        REQUIRE_FALSE(oc.already_fixed);
        REQUIRE_FALSE(oc.contradiction);
    }
}

TEST_CASE("random_solve in two dimensions", "[driver]") {
    RandomOperator T;
    T.dim = 2;
    T.domain = ValueSet::box(Box::rect(0.0, 1.0, 0.0, 1.0));
    OperatorPiece piece;
    piece.pred.box = Box::rect(0.0, 1.0, 0.0, 1.0);
    piece.value = PieceValue::constant_set(ValueSet::box(Box::rect(0.2, 0.4, 0.3, 0.5)));
    piece.id = "plateau";
    T.pieces = {piece};
    SolverParams params;
    params.oracle_resolution = 0.02;
    params.grid = 1024;
    const auto result = random_solve(T, OmegaPartition(0.0, 1.0, 4), T.domain, params);
    REQUIRE(result.selection.sup_residual <= params.tol);
    for (const auto* r : result.selection.all()) {
        REQUIRE(set_contains(ValueSet::box(Box::rect(0.2, 0.4, 0.3, 0.5)), r->xi, 1e-9));
        REQUIRE(residual(T, r->omega, r->xi) <= params.tol);
    }
}

TEST_CASE("worker cap respects the environment", "[driver]") {
    setenv("SVFIX_THREADS", "1", 1);
    REQUIRE(worker_count() == 1);
    setenv("SVFIX_THREADS", "3", 1);
    REQUIRE(worker_count() == 3);
    unsetenv("SVFIX_THREADS");
    REQUIRE(worker_count() >= 1);
}

TEST_CASE("selections are simple functions", "[driver][property]") {
    const Scenario ex1 = builtin_example1();
    const auto result = random_solve(ex1.op, ex1.omega, ex1.op.domain, ex1.params);
    // piecewise constant on cells: one value per cell, indices complete
    REQUIRE(result.selection.cells.size() == static_cast<std::size_t>(ex1.omega.cells));
    for (int k = 0; k < ex1.omega.cells; ++k)
        REQUIRE(result.selection.cells[static_cast<std::size_t>(k)].index == k);
    REQUIRE(result.selection.measurability.find("simple function") != std::string::npos);
}
