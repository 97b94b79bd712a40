#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace svfix;
using namespace svfix_test;
using Catch::Matchers::WithinAbs;

TEST_CASE("set_distance closed forms", "[geometry]") {
    REQUIRE(set_distance(Vector(1.00005), ValueSet::interval(-1.0, 1.0)) ==
            Catch::Approx(0.00005).margin(1e-15));
    REQUIRE(set_distance(Vector(0.3), ValueSet::interval(0.1, 0.5)) == 0.0);
    REQUIRE(set_distance(Vector(0.0, 0.0), ValueSet::ball(Vector(3.0, 4.0), 1.0)) == 4.0);

    const ValueSet tri = ValueSet::polytope({Vector(0, 0), Vector(1, 0), Vector(0, 1)});
    REQUIRE(set_distance(Vector(0.25, 0.25), tri) == 0.0);
    REQUIRE_THAT(set_distance(Vector(2.0, 0.0), tri), WithinAbs(1.0, 1e-15));

    const ValueSet half = ValueSet::half_space(Vector(1.0, 0.0), 0.0);
    REQUIRE(set_distance(Vector(-1.0, 5.0), half) == 0.0);
    REQUIRE(set_distance(Vector(2.0, 5.0), half) == 2.0);

    const ValueSet ray = ValueSet::ray(Vector(0.0, 0.0), Vector(1.0, 0.0));
    REQUIRE(set_distance(Vector(-3.0, 4.0), ray) == 5.0);
    REQUIRE(set_distance(Vector(7.0, 0.0), ray) == 0.0);

    REQUIRE_THROWS_AS(set_distance(Vector(0.0), ValueSet::empty(1)), std::domain_error);
}

TEST_CASE("set_enlarge is the exact closed enlargement", "[geometry]") {
    const ValueSet a = set_enlarge(ValueSet::interval(0.1, 0.5), 0.05);
    const Box ab = bounding_box(a);
    REQUIRE(ab.lo[0] == Catch::Approx(0.05).margin(1e-15));
    REQUIRE(ab.hi[0] == Catch::Approx(0.55).margin(1e-15));

    // the enlargement-hypothesis instance: {0.00005} enlarged by 1/20000
    const ValueSet b = set_enlarge(ValueSet::point(Vector(0.00005)), 1.0 / 20000.0);
    const Box bb = bounding_box(b);
    REQUIRE(bb.lo[0] == 0.0);
    REQUIRE(bb.hi[0] == 0.0001);

    const ValueSet c = set_enlarge(ValueSet::ball(Vector(1.0, 2.0), 0.5), 0.25);
    REQUIRE(c.get_if<BallData>()->radius == 0.75);

    REQUIRE_THROWS_AS(set_enlarge(ValueSet::interval(0, 1), 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(set_enlarge(ValueSet::interval(0, 1), -0.1), std::invalid_argument);

    // unbounded sets enlarge exactly too
    const ValueSet h = set_enlarge(ValueSet::half_space(Vector(1.0), 0.0), 0.5);
    REQUIRE(set_distance(Vector(0.4), h) == 0.0);
    REQUIRE(set_distance(Vector(0.6), h) == Catch::Approx(0.1).margin(1e-15));
}

TEST_CASE("set_enlarge monotone and distance-compatible", "[geometry][property]") {
    for (int i = 0; i < 1000; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        const ValueSet s = random_bounded_set(dim);
        const double e1 = uniform(1e-6, 0.5);
        const double e2 = e1 + uniform(0.0, 0.5);
        const ValueSet big1 = set_enlarge(s, e1);
        const ValueSet big2 = set_enlarge(s, e2);
        const Vector y = random_vector(dim, -4.0, 4.0);
        // monotone: every point of the smaller enlargement is in the larger
        if (set_contains(big1, y))
            REQUIRE(set_contains(big2, y, 1e-12));
        // distance compatibility
        REQUIRE(set_distance(y, big1) >= set_distance(y, s) - e1 - 1e-12);
        REQUIRE(set_distance(y, big1) <= std::max(0.0, set_distance(y, s) - e1) + 1e-12);
    }
}

TEST_CASE("distance zero exactly on the closure", "[geometry][property]") {
    for (int i = 0; i < 1000; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        const ValueSet s = random_bounded_set(dim);
        const Vector y = random_vector(dim, -4.0, 4.0);
        const double d = set_distance(y, s);
        REQUIRE(d >= 0.0);
        REQUIRE(set_contains(s, y) == (d == 0.0));
        if (d > 0.0) {
            // the enlargement by d reaches y (closure semantics)
            REQUIRE(set_distance(y, set_enlarge(s, d + 1e-12)) <= 1e-9);
        }
    }
}

TEST_CASE("set_hull", "[geometry]") {
    const ValueSet u = ValueSet::interval_union(
        {Box::interval(0.0, 0.1), Box::interval(0.4, 0.5)});
    const Box hb = bounding_box(set_hull(u));
    REQUIRE(hb.lo[0] == 0.0);
    REQUIRE(hb.hi[0] == 0.5);

    const ValueSet tri = set_hull(ValueSet::points({Vector(0, 0), Vector(1, 0), Vector(0, 1)}));
    REQUIRE(tri.holds<PolytopeData>());
    REQUIRE(tri.get_if<PolytopeData>()->vertices.size() == 3);

    REQUIRE_THROWS_AS(set_hull(ValueSet::half_space(Vector(1.0), 0.0)), std::domain_error);

    // radial image of S sits inside hull(S union {0})
    for (int i = 0; i < 20; ++i) {
        const ValueSet s = random_bounded_set(2);
        std::vector<Vector> pts = sample_value_set(s, 100);
        std::vector<Vector> with_zero = pts;
        with_zero.push_back(Vector(0.0, 0.0));
        const ValueSet hull = set_hull(ValueSet::points(with_zero));
        for (const Vector& p : pts)
            REQUIRE(set_distance(radial_retraction(p), hull) <= 1e-9);
    }
}

TEST_CASE("normalization is idempotent and merges 1D intervals", "[geometry]") {
    const ValueSet u = ValueSet::interval_union(
        {Box::interval(0.5, 1.0), Box::interval(0.0, 0.6), Box::interval(2.0, 3.0)});
    const auto* iv = u.get_if<IntervalUnionData>();
    REQUIRE(iv->boxes.size() == 2);
    REQUIRE(iv->boxes[0].lo[0] == 0.0);
    REQUIRE(iv->boxes[0].hi[0] == 1.0);

    ValueSet again = u;
    again.normalize();
    REQUIRE(again.get_if<IntervalUnionData>()->boxes.size() == 2);

    // 1D balls fold into intervals, points with inflation into intervals
    const ValueSet b = ValueSet::ball(Vector(0.5), 0.25);
    REQUIRE(b.holds<IntervalUnionData>());
    const ValueSet p = ValueSet::point(Vector(1.0)).inflated(0.5);
    REQUIRE(p.holds<IntervalUnionData>());
    REQUIRE(bounding_box(p).lo[0] == 0.5);
}

TEST_CASE("support and containment", "[geometry]") {
    const ValueSet box = ValueSet::box(Box::rect(0.0, 1.0, 0.0, 2.0));
    REQUIRE(set_support(box, Vector(1.0, 0.0)) == 1.0);
    REQUIRE(set_support(box, Vector(0.0, -1.0)) == 0.0);
    REQUIRE(set_contained_in(box, ValueSet::ball(Vector(0.5, 1.0), 1.2)));
    REQUIRE_FALSE(set_contained_in(box, ValueSet::ball(Vector(0.5, 1.0), 1.1)));
    REQUIRE(set_contained_in(ValueSet::interval(0.2, 0.3), ValueSet::interval(0.0, 1.0)));
    REQUIRE_FALSE(set_contained_in(ValueSet::interval(-0.1, 0.3), ValueSet::interval(0.0, 1.0)));
}
