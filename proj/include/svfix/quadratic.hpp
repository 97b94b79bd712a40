#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace svfix {

/// Polynomial c0 + c1*x + c2*x^2. Degree two is all the piecewise envelopes
/// ever need; everything about it is solvable in closed form.
struct Quadratic {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;

    Quadratic() = default;
    Quadratic(double a0, double a1 = 0.0, double a2 = 0.0) : c0(a0), c1(a1), c2(a2) {}

    static Quadratic constant(double v) { return Quadratic(v); }
    static Quadratic identity() { return Quadratic(0.0, 1.0); }

    double operator()(double x) const { return c0 + x * (c1 + x * c2); }

    bool is_constant() const { return c1 == 0.0 && c2 == 0.0; }
    bool is_zero() const { return c0 == 0.0 && is_constant(); }

    Quadratic scaled(double s) const { return Quadratic(s * c0, s * c1, s * c2); }
    Quadratic minus_identity() const { return Quadratic(c0, c1 - 1.0, c2); }
    Quadratic shifted(double d) const { return Quadratic(c0 + d, c1, c2); }
    Quadratic negated() const { return Quadratic(-c0, -c1, -c2); }

    /// Exact min/max over the closed interval [a, b] (endpoints + vertex).
    std::pair<double, double> range(double a, double b) const {
        double lo = std::min((*this)(a), (*this)(b));
        double hi = std::max((*this)(a), (*this)(b));
        if (c2 != 0.0) {
            const double v = -c1 / (2.0 * c2);
            if (v > a && v < b) {
                const double pv = (*this)(v);
                lo = std::min(lo, pv);
                hi = std::max(hi, pv);
            }
        }
        return {lo, hi};
    }

    /// Real roots, ascending. A zero polynomial reports "everywhere" instead.
    struct Roots {
        bool everywhere = false;
        std::vector<double> values;
    };

    Roots roots() const {
        Roots r;
        if (c2 == 0.0) {
            if (c1 == 0.0) {
                if (c0 == 0.0)
                    r.everywhere = true;
                return r;
            }
            r.values.push_back(-c0 / c1);
            return r;
        }
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc < 0.0)
            return r;
        if (disc == 0.0) {
            r.values.push_back(-c1 / (2.0 * c2));
            return r;
        }
        const double sq = std::sqrt(disc);
        // Numerically stable pair: q avoids cancellation on the small root.
        const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
        double r1 = q / c2;
        double r2 = (q != 0.0) ? c0 / q : -c1 / c2 - r1;
        if (r1 > r2)
            std::swap(r1, r2);
        r.values = {r1, r2};
        return r;
    }

    /// Closed solution intervals of p(x) <= 0 over the whole line, as up to
    /// two intervals with +-infinity sentinels.
    std::vector<std::pair<double, double>> nonpositive_set() const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, double>> out;
        if (c2 == 0.0) {
            if (c1 == 0.0) {
                if (c0 <= 0.0)
                    out.emplace_back(-inf, inf);
                return out;
            }
            const double r = -c0 / c1;
            if (c1 > 0.0)
                out.emplace_back(-inf, r);
            else
                out.emplace_back(r, inf);
            return out;
        }
        const Roots rt = roots();
        if (rt.values.empty()) {
            // No real root: sign is the sign of c2 everywhere.
            if (c2 < 0.0)
                out.emplace_back(-inf, inf);
            return out;
        }
        const double r1 = rt.values.front();
        const double r2 = rt.values.back();
        if (c2 > 0.0) {
            out.emplace_back(r1, r2);
        } else {
            out.emplace_back(-inf, r1);
            out.emplace_back(r2, inf);
        }
        return out;
    }

    /// Bound on |p'| over [a, b].
    double derivative_bound(double a, double b) const {
        const double da = std::abs(c1 + 2.0 * c2 * a);
        const double db = std::abs(c1 + 2.0 * c2 * b);
        return std::max(da, db);
    }
};

} // namespace svfix
