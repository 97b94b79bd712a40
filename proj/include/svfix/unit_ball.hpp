#pragma once

#include <cmath>
#include <stdexcept>

#include "svfix/value_set.hpp"
#include "svfix/vector.hpp"

namespace svfix {

inline constexpr double kBoundaryTol = 1e-9;

/// The B1 / B2 frame of the approximation pipeline: the closed unit ball and
/// the radius-2 ball around the origin, Euclidean norm.
struct UnitBallFrame {
    double radius_inner = 1.0;
    double radius_outer = 2.0;

    ValueSet inner_ball(int dim) const {
        return dim == 1 ? ValueSet::interval(-radius_inner, radius_inner)
                        : ValueSet::ball(Vector::zero(2), radius_inner);
    }
    ValueSet outer_ball(int dim) const {
        return dim == 1 ? ValueSet::interval(-radius_outer, radius_outer)
                        : ValueSet::ball(Vector::zero(2), radius_outer);
    }
    bool on_unit_sphere(const Vector& x, double tol = kBoundaryTol) const {
        return std::abs(x.norm() - radius_inner) <= tol;
    }
};

/// r(x) = x on B1, x/||x|| outside. Nonexpansive, idempotent.
inline Vector radial_retraction(const Vector& x) {
    const double n = x.norm();
    if (n <= 1.0)
        return x;
    return (1.0 / n) * x;
}

/// Closure of the inward set of B1 at xi: the whole space when xi is
/// interior, the tangent half-space {z : <z - xi, xi> <= 0} when xi is on
/// the unit sphere.
inline ValueSet inward_set_closure(const Vector& xi, double tol = kBoundaryTol) {
    const double n = xi.norm();
    if (n > 1.0 + tol)
        throw std::domain_error("base point outside unit ball");
    if (n < 1.0 - tol) {
        // Whole space: encode as the trivial half-space x . 0 <= 0? Instead
        // report via distance below; callers use inward_distance.
        throw std::logic_error("inward set closure of interior point is the whole space");
    }
    return ValueSet::half_space(xi, dot(xi, xi));
}

/// d(eta, cl I_{B1}(xi)). Zero when xi is interior; the tangent half-space
/// distance max(0, <eta - xi, xi>) on the boundary.
inline double inward_distance(const Vector& eta, const Vector& xi, double tol = kBoundaryTol) {
    const double n = xi.norm();
    if (n > 1.0 + tol)
        throw std::domain_error("base point outside unit ball");
    if (n < 1.0 - tol)
        return 0.0;
    return std::max(0.0, dot(eta - xi, xi) / n);
}

} // namespace svfix
