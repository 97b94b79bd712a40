#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace svfix;
using namespace svfix_test;

TEST_CASE("radial retraction", "[geometry]") {
    REQUIRE(radial_retraction(Vector(0.5)) == Vector(0.5));
    REQUIRE(radial_retraction(Vector(1.00005)) == Vector(1.0));
    const Vector r = radial_retraction(Vector(3.0, 4.0));
    REQUIRE(r.x() == Catch::Approx(0.6).margin(1e-15));
    REQUIRE(r.y() == Catch::Approx(0.8).margin(1e-15));
}

TEST_CASE("inward distance closed form", "[geometry]") {
    // the worked 1D case: I_{[-1,1]}(1) closes to (-inf, 1]
    REQUIRE(inward_distance(Vector(1.00005), Vector(1.0)) ==
            Catch::Approx(0.00005).margin(1e-15));
    // interior base point: closure is everything
    REQUIRE(inward_distance(Vector(5.0), Vector(0.2)) == 0.0);
    REQUIRE(inward_distance(Vector(-3.0, 2.0), Vector(0.1, 0.2)) == 0.0);
    // tangent half-space in 2D
    REQUIRE(inward_distance(Vector(1.5, 0.0), Vector(1.0, 0.0)) == 0.5);
    REQUIRE(inward_distance_sampled(Vector(1.5, 0.0), Vector(1.0, 0.0)) ==
            Catch::Approx(0.5).margin(1e-3));
    REQUIRE_THROWS_AS(inward_distance(Vector(0.0), Vector(1.5)), std::domain_error);
}

TEST_CASE("inward set closure is the tangent half-space", "[geometry]") {
    const ValueSet half = inward_set_closure(Vector(1.0));
    REQUIRE(set_distance(Vector(1.00005), half) == Catch::Approx(0.00005).margin(1e-15));
    REQUIRE(set_distance(Vector(-10.0), half) == 0.0);
}

TEST_CASE("geometry property suite", "[geometry][property]") {
    const auto r = geometry_property_suite();
    INFO(r.detail);
    REQUIRE(r.ok);
    REQUIRE(r.checked >= 2200);
}

TEST_CASE("unit ball frame", "[geometry]") {
    const UnitBallFrame f;
    REQUIRE(f.on_unit_sphere(Vector(1.0)));
    REQUIRE(f.on_unit_sphere(Vector(1.0 + 5e-10)));
    REQUIRE_FALSE(f.on_unit_sphere(Vector(1.0 + 5e-9)));
    REQUIRE(set_distance(Vector(0.3), f.inner_ball(1)) == 0.0);
    REQUIRE(set_distance(Vector(0.0, 2.5), f.outer_ball(2)) == 0.5);
}
