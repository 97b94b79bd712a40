#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace svfix;
using namespace svfix_test;

namespace {

bool matches_intervals(const FlaggedSet& got,
                       const std::vector<std::pair<double, double>>& want, double tol = 1e-12) {
    if (got.parts().size() != want.size())
        return false;
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (std::abs(got.parts()[i].lo - want[i].first) > tol)
            return false;
        if (std::abs(got.parts()[i].hi - want[i].second) > tol)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("evaluate the worked operators", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    const ValueSet flat = evaluate(ex1.op, 0.005, Vector(0.005));
    REQUIRE(set_contains(flat, Vector(0.00005)));
    REQUIRE(set_diameter(flat) <= 1e-15);

    const ValueSet off = evaluate(ex1.op, 0.3, Vector(0.2));
    const Box off_bb = bounding_box(off);
    REQUIRE(off_bb.lo[0] == 0.00005);
    REQUIRE(off_bb.hi[0] == 0.5);

    const Scenario ex2 = builtin_example2();
    const Box at1 = bounding_box(evaluate(ex2.op, 1.0, Vector(1.0)));
    REQUIRE(at1.lo[0] == Catch::Approx(-1.5).margin(1e-15));
    REQUIRE(at1.hi[0] == Catch::Approx(2.5).margin(1e-15));

    REQUIRE_THROWS_WITH(evaluate(ex1.op, 0.3, Vector(3.0)),
                        Catch::Matchers::ContainsSubstring("outside"));
}

TEST_CASE("domain gap reported", "[correspondence]") {
    RandomOperator gappy;
    gappy.dim = 1;
    gappy.domain = ValueSet::interval(0.0, 2.0);
    gappy.pieces = {OperatorPiece{PiecePredicate::interval(0.0, 1.0, true, true),
                                  PieceValue::constant_set(ValueSet::interval(0.0, 1.0)), "p0"}};
    REQUIRE_THROWS_WITH(evaluate(gappy, 0.0, Vector(1.5)),
                        Catch::Matchers::ContainsSubstring("domain gap"));
    REQUIRE_FALSE(validate_operator(gappy).empty());
}

TEST_CASE("residual of the worked operator", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    REQUIRE(residual(ex1.op, 0.00005, Vector(0.00005)) == 0.0);
    REQUIRE(residual(ex1.op, 0.2, Vector(0.2)) == Catch::Approx(0.18).margin(1e-15));
    REQUIRE(residual(ex1.op, 15.0 / 32.0, Vector(15.0 / 32.0)) == 0.0);
}

TEST_CASE("preimage matches the worked inverse tables", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    // omega in the flat bucket
    REQUIRE(matches_intervals(preimage(ex1.op, 0.005, 0.00005), {{0.0, 0.01}}));
    // {omega, sqrt(2y)}
    const auto two = preimage(ex1.op, 0.3, 0.08);
    REQUIRE(matches_intervals(two, {{0.3, 0.3}, {0.4, 0.4}}, 1e-12));
    // below the smallest value: empty refutation
    REQUIRE(preimage(ex1.op, 0.3, 0.00001).is_empty());
    // above the range: empty
    REQUIRE(preimage(ex1.op, 0.3, 0.7).is_empty());
    REQUIRE_THROWS_AS(
        [] {
            RandomOperator t2;
            t2.dim = 2;
            t2.domain = ValueSet::box(Box::rect(0, 1, 0, 1));
            return preimage(t2, 0.0, 0.5);
        }(),
        std::invalid_argument);
}

TEST_CASE("preimage duality on base operators", "[correspondence][property]") {
    const auto r = preimage_duality_suite();
    INFO(r.detail);
    REQUIRE(r.ok);
    REQUIRE(r.checked >= 9000);
}

TEST_CASE("diagonal value is omega-independent off the diagonal", "[correspondence][property]") {
    const Scenario ex1 = builtin_example1();
    for (int i = 0; i < 200; ++i) {
        const double x = uniform(0.0, 2.0);
        const double w1 = uniform(0.0, 2.0);
        const double w2 = uniform(0.0, 2.0);
        if (x == w1 || x == w2)
            continue;
        const Box a = bounding_box(evaluate(ex1.op, w1, Vector(x)));
        const Box b = bounding_box(evaluate(ex1.op, w2, Vector(x)));
        REQUIRE(a.lo[0] == b.lo[0]);
        REQUIRE(a.hi[0] == b.hi[0]);
    }
}

TEST_CASE("evaluate/residual consistency", "[correspondence][property]") {
    const Scenario ex1 = builtin_example1();
    const FrozenOperator frozen(ex1.op, 0.37);
    for (int i = 0; i <= 2000; ++i) {
        const double x = 2.0 * i / 2000.0;
        const double res = frozen.residual(Vector(x));
        REQUIRE((res == 0.0) == set_contains(frozen.evaluate(Vector(x)), Vector(x)));
    }
}

TEST_CASE("certify_inverse_closed", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    for (double w : {0.005, 0.3, 15.0 / 32.0, 0.7, 1.5}) {
        const auto cert =
            certify_inverse_closed(ex1.op, w, uniform_y_grid(FrozenOperator(ex1.op, w), 256));
        INFO("omega = " << w << ": " << cert.detail);
        REQUIRE(cert.certified);
    }
    // constant operator: preimage is the whole domain or empty
    const RandomOperator c = constant_operator(ValueSet::interval(0.2, 0.4),
                                               ValueSet::interval(0.0, 1.0));
    REQUIRE(certify_inverse_closed(c, 0.0, {0.1, 0.3, 0.9}).certified);

    // operator with a genuinely half-open preimage piece
    RandomOperator open_piece;
    open_piece.dim = 1;
    open_piece.domain = ValueSet::interval(0.0, 2.0);
    open_piece.pieces = {
        OperatorPiece{PiecePredicate::interval(0.0, 1.0, true, false),
                      PieceValue::constant_set(ValueSet::interval(0.0, 1.0)), "open-top"},
        OperatorPiece{PiecePredicate::interval(1.0, 2.0, true, true),
                      PieceValue::constant_set(ValueSet::interval(5.0, 6.0)), "far"}};
    const auto refuted = certify_inverse_closed(open_piece, 0.0, {0.5});
    REQUIRE_FALSE(refuted.certified);
    REQUIRE(refuted.witness_y.has_value());
    // witness is re-checkable: the preimage at the witness level is not closed
    REQUIRE_FALSE(FrozenOperator(open_piece, 0.0).preimage(*refuted.witness_y).is_closed());
}

TEST_CASE("range_envelope", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    // with the diagonal: defaults dominate
    const Box env = bounding_box(range_envelope(ex1.op, 0.005, ValueSet::interval(0.0, 0.01)));
    REQUIRE(env.lo[0] == 0.00005);
    REQUIRE(env.hi[0] == 0.5);

    // base map alone over [0, 2], against a dense scan
    const RandomOperator base = example1_base();
    const ValueSet base_env = range_envelope(base, 0.0, ValueSet::interval(0.0, 2.0));
    const Box bb = bounding_box(base_env);
    REQUIRE(bb.lo[0] == 0.00005);
    REQUIRE(bb.hi[0] == 0.5);
    const FrozenOperator frozen(base, 0.0);
    for (int i = 0; i <= 10000; ++i) {
        const double x = 2.0 * i / 10000.0;
        const Box val = bounding_box(frozen.evaluate(Vector(x)));
        REQUIRE(val.lo[0] >= bb.lo[0] - 1e-12);
        REQUIRE(val.hi[0] <= bb.hi[0] + 1e-12);
    }

    // single point region degenerates to evaluate
    const Box point_env =
        bounding_box(range_envelope(base, 0.0, ValueSet::point(Vector(0.2))));
    REQUIRE(point_env.lo[0] == Catch::Approx(0.02).margin(1e-15));
    REQUIRE(point_env.hi[0] == Catch::Approx(0.02).margin(1e-15));

    // union additivity up to normalization
    const ValueSet left = range_envelope(base, 0.0, ValueSet::interval(0.0, 0.3));
    const ValueSet right = range_envelope(base, 0.0, ValueSet::interval(0.3, 2.0));
    const ValueSet both = range_envelope(
        base, 0.0,
        ValueSet::interval_union({Box::interval(0.0, 0.3), Box::interval(0.3, 2.0)}));
    for (int i = 0; i <= 500; ++i) {
        const double y = -0.1 + 0.8 * i / 500.0;
        const bool in_union =
            set_contains(left, Vector(y)) || set_contains(right, Vector(y));
        REQUIRE(in_union == set_contains(both, Vector(y)));
    }
}

TEST_CASE("find_n0", "[correspondence]") {
    const Scenario ex1 = builtin_example1();
    REQUIRE(find_n0(ex1.op, ex1.omega, ex1.op.domain) == 20000);

    // comfortable margin: range [0.25, 0.75] inside [0, 1]
    const RandomOperator mid = constant_operator(ValueSet::interval(0.25, 0.75),
                                                 ValueSet::interval(0.0, 1.0));
    REQUIRE(find_n0(mid, OmegaPartition(0.0, 1.0, 4), ValueSet::interval(0.0, 1.0)) == 4);

    // range touching the boundary: no margin at all
    const RandomOperator touch = constant_operator(ValueSet::interval(0.0, 0.5),
                                                   ValueSet::interval(0.0, 1.0));
    REQUIRE_THROWS_WITH(find_n0(touch, OmegaPartition(0.0, 1.0, 4), ValueSet::interval(0.0, 1.0)),
                        Catch::Matchers::ContainsSubstring("n0 unsatisfiable"));
}

TEST_CASE("omega partition", "[correspondence]") {
    const OmegaPartition p(0.0, 2.0, 64, {0.00005, 15.0 / 32.0, 1.0});
    REQUIRE(p.all_representatives().size() == 67);
    REQUIRE(p.representative(0) == Catch::Approx(2.0 / 128.0).margin(1e-15));
    REQUIRE(p.cell_lo(0) == 0.0);
    REQUIRE(p.cell_hi(63) == 2.0);
    REQUIRE_THROWS_AS(OmegaPartition(0.0, 1.0, 4, {2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(OmegaPartition(1.0, 0.0, 4), std::invalid_argument);
}
