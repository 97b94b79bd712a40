#pragma once

#include <sstream>
#include <string>

#include "test_helpers.hpp"

namespace svfix_test {

struct SuiteResult {
    bool ok = true;
    int checked = 0;
    std::string detail;

    void fail(const std::string& why) {
        if (ok)
            detail = why;
        ok = false;
    }
};

/// Retraction idempotence / nonexpansiveness / identity-on-B1, the norm
/// chain of the approximation proof, and the inward-set closed form against
/// the sampling oracle.
inline SuiteResult geometry_property_suite() {
    SuiteResult r;
    for (int i = 0; i < 1000 && r.ok; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        const Vector x = random_vector(dim);
        const Vector y = random_vector(dim);
        const Vector rx = radial_retraction(x);
        ++r.checked;
        if (rx.norm() > 1.0 + 1e-12)
            r.fail("retraction left the unit ball at " + x.str());
        if (distance(radial_retraction(rx), rx) > 1e-12)
            r.fail("retraction not idempotent at " + x.str());
        if (x.norm() <= 1.0 && !(rx == x))
            r.fail("retraction moved an interior point " + x.str());
        if (distance(rx, radial_retraction(y)) > distance(x, y) + 1e-12)
            r.fail("retraction expanded a pair near " + x.str());
    }
    // ||eta - xi|| = ||eta|| - 1 = d(eta, B1) for eta outside the ball
    for (int i = 0; i < 1000 && r.ok; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        Vector eta = random_vector(dim);
        if (eta.norm() <= 1.0 + 1e-6) {
            const double target = uniform(1.1, 3.0);
            eta = eta.norm() < 1e-9 ? (dim == 1 ? Vector(target) : Vector(target, 0.0))
                                    : (target / eta.norm()) * eta;
        }
        const Vector xi = radial_retraction(eta);
        const ValueSet b1 = UnitBallFrame{}.inner_ball(dim);
        ++r.checked;
        if (std::abs(distance(eta, xi) - (eta.norm() - 1.0)) > 1e-9)
            r.fail("pair distance differs from ||eta|| - 1 at " + eta.str());
        if (std::abs(distance(eta, xi) - set_distance(eta, b1)) > 1e-9)
            r.fail("pair distance differs from d(eta, B1) at " + eta.str());
        if (std::abs(inward_distance(eta, xi) - set_distance(eta, b1)) > 1e-9)
            r.fail("inward distance differs from d(eta, B1) at " + eta.str());
    }
    // closed form vs brute-force sampling on boundary base points
    for (int i = 0; i < 200 && r.ok; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        Vector xi = dim == 1 ? Vector(i % 4 < 2 ? 1.0 : -1.0) : [&] {
            const double a = uniform(0.0, 6.283185307179586);
            return Vector(std::cos(a), std::sin(a));
        }();
        Vector eta;
        if (dim == 1) {
            eta = Vector(xi.x() + uniform(-0.5, 1.0) * xi.x());
        } else {
            const Vector tangent(-xi.y(), xi.x());
            eta = xi + uniform(-0.5, 1.0) * xi + uniform(-0.6, 0.6) * tangent;
        }
        const double closed_form = inward_distance(eta, xi);
        const double sampled = inward_distance_sampled(eta, xi);
        ++r.checked;
        if (std::abs(closed_form - sampled) > 1e-3)
            r.fail("inward closed form vs sampled oracle differ by " +
                   std::to_string(std::abs(closed_form - sampled)));
    }
    if (r.ok) {
        std::ostringstream os;
        os << r.checked << " geometry property checks";
        r.detail = os.str();
    }
    return r;
}

/// Kuratowski gauge properties (1)-(3) on random sets.
inline SuiteResult gauge_property_suite() {
    SuiteResult r;
    for (int i = 0; i < 200 && r.ok; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        const ValueSet a = random_bounded_set(dim);
        const ValueSet b = random_bounded_set(dim);
        ++r.checked;
        if (!kuratowski_gauge(a).zero())
            r.fail("property (1): bounded set measured infinite");
        if (!(kuratowski_gauge(set_hull(a)) == kuratowski_gauge(a)))
            r.fail("property (2): hull changed the gauge");
        // property (3) on the union, via the interval-union embedding
        const Gauge ga = kuratowski_gauge(a), gb = kuratowski_gauge(b);
        std::vector<Box> boxes;
        for (const ValueSet* s : {&a, &b}) {
            const Box bb = bounding_box(*s);
            boxes.push_back(bb);
        }
        const Gauge gu = kuratowski_gauge(ValueSet::interval_union(boxes));
        if (gu.infinite != (ga.infinite || gb.infinite))
            r.fail("property (3): union gauge differs from the max");
        // monotonicity: subset never exceeds
        if (kuratowski_gauge(a).infinite && !kuratowski_gauge(set_hull(a)).infinite)
            r.fail("monotonicity violated");
    }
    const ValueSet half = ValueSet::half_space(Vector(1.0), 0.0);
    ++r.checked;
    if (!kuratowski_gauge(half).infinite)
        r.fail("unbounded set not assigned the infinite gauge");
    if (r.ok)
        r.detail = std::to_string(r.checked) + " gauge property checks";
    return r;
}

/// Preimage duality y in T(x) <=> x in T^{-1}(y) for base (non-diagonal)
/// operators, skipping hairline boundary cases below 1e-9.
inline SuiteResult preimage_duality_suite() {
    SuiteResult r;
    const RandomOperator base1 = example1_base();
    const RandomOperator base2 = example2_base();
    for (int i = 0; i < 10000 && r.ok; ++i) {
        const bool first = i % 2 == 0;
        const RandomOperator& T = first ? base1 : base2;
        const double lo = first ? 0.0 : -2.0;
        const double hi = 2.0;
        const double x = uniform(lo, hi);
        const double y = uniform(first ? -0.2 : -2.5, first ? 0.8 : 3.0);
        const FrozenOperator frozen(T, 0.0);
        const ValueSet value = frozen.evaluate(Vector(x));
        double boundary_gap = kInf;
        for (const auto& part : FlaggedSet::from_value_set(value).parts())
            boundary_gap =
                std::min({boundary_gap, std::abs(y - part.lo), std::abs(y - part.hi)});
        if (boundary_gap < 1e-9)
            continue; // grazing the value boundary: root round-off may flip sides
        const bool forward = set_distance(Vector(y), value) == 0.0;
        const bool backward = frozen.preimage(y).contains(x);
        ++r.checked;
        if (forward != backward) {
            std::ostringstream os;
            os << "duality broke at x = " << x << ", y = " << y;
            r.fail(os.str());
        }
    }
    if (r.ok)
        r.detail = std::to_string(r.checked) + " duality checks";
    return r;
}

/// Condition iii implies condition ii on the same instance (lambda = 0).
inline SuiteResult boundary_implication_suite() {
    SuiteResult r;
    for (int i = 0; i < 100 && r.ok; ++i) {
        const int dim = i % 2 == 0 ? 1 : 2;
        Vector x = dim == 1 ? Vector(i % 4 < 2 ? 1.0 : -1.0) : [&] {
            const double a = uniform(0.0, 6.283185307179586);
            return Vector(std::cos(a), std::sin(a));
        }();
        // value sets that sometimes satisfy iii: balls pulled inward by a
        // random amount
        const double pull = uniform(0.0, 1.5);
        const double radius = uniform(0.05, 0.8);
        const ValueSet S = dim == 1
                               ? ValueSet::interval(x.x() * (1.0 - pull) - radius,
                                                    x.x() * (1.0 - pull) + radius)
                               : ValueSet::ball((1.0 - pull) * x, radius);
        const std::vector<Vector> Y = sample_value_set(S, 16);
        BoundaryParams params;
        params.values = &S;
        const auto iii = check_boundary_condition(BoundaryCondition::iii, x, Y, params);
        const auto ii = check_boundary_condition(BoundaryCondition::ii, x, Y, params);
        ++r.checked;
        if (iii.holds && !ii.holds)
            r.fail("condition iii held but ii failed at x = " + x.str());
    }
    if (r.ok)
        r.detail = std::to_string(r.checked) + " implication checks";
    return r;
}

} // namespace svfix_test
