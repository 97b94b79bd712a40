#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "svfix/continuity.hpp"
#include "svfix/correspondence.hpp"
#include "svfix/noncompactness.hpp"
#include "svfix/selection.hpp"
#include "svfix/unit_ball.hpp"

namespace svfix {

struct NoFixedPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// invariant compact set

struct InvariantCompact {
    ValueSet K;
    bool containment_verified = false;
    int iterations = 0;
};

/// Iterates K <- hull(enlarge(T(w,K), 1/n0)) intersect K from K = C until
/// stable (1e-12). Verifies the containment B(T(w,K), 1/n0) within K; maps
/// whose range touches the boundary of C (the identity) stabilize at K = C
/// with the flag left false.
inline InvariantCompact find_invariant_compact(const RandomOperator& T, double omega,
                                               const ValueSet& C, int n0) {
    const FrozenOperator frozen(T, omega);
    const double eps = 1.0 / n0;
    Box cur = bounding_box(C);
    InvariantCompact out;
    for (int iter = 0; iter < 1000; ++iter) {
        out.iterations = iter + 1;
        const ValueSet K = T.dim == 1 ? ValueSet::interval(cur.lo[0], cur.hi[0]) : ValueSet::box(cur);
        ValueSet env;
        try {
            env = frozen.range_envelope(K);
        } catch (const std::invalid_argument&) {
            throw NoFixedPointError("no invariant compact found");
        }
        const Box grown = bounding_box(set_hull(set_enlarge(env, eps)));
        const auto next = grown.intersect(cur);
        if (!next)
            throw NoFixedPointError("no invariant compact found");
        bool stable = true;
        for (int i = 0; i < cur.dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (std::abs(next->lo[k] - cur.lo[k]) > 1e-12 ||
                std::abs(next->hi[k] - cur.hi[k]) > 1e-12)
                stable = false;
        }
        cur = *next;
        if (stable)
            break;
    }
    out.K = T.dim == 1 ? ValueSet::interval(cur.lo[0], cur.hi[0]) : ValueSet::box(cur);
    const ValueSet env = frozen.range_envelope(out.K);
    out.containment_verified = set_contained_in(set_enlarge(env, eps), out.K, 1e-12);
    return out;
}

// ---------------------------------------------------------------------------
// the eps_n fixed-point loop

struct TraceEntry {
    int n = 0;
    double eps_n = 0.0;
    Vector x;
    double residual = 0.0;
    double best_residual = 0.0;
};

struct SolveReport {
    bool success = false;
    Vector fixed_point;
    double residual = kInf;
    int iterations = 0;
    std::vector<double> epsilon_schedule;
    std::vector<TraceEntry> trace;
    std::string message;
};

namespace detail {

/// Exact fixed points of the piecewise-linear selection: isolated roots of
/// f(x) - x plus the left ends of flat-zero stretches.
inline std::vector<double> selection_roots_1d(const SelectionField& f) {
    std::vector<double> roots;
    auto g = [&f](int i) { return f.values[static_cast<std::size_t>(i)].x() - f.node_x(i); };
    for (int i = 0; i + 1 < f.nx; ++i) {
        const double ga = g(i), gb = g(i + 1);
        if (ga == 0.0)
            roots.push_back(f.node_x(i));
        if (ga == 0.0 && gb == 0.0)
            continue; // flat zero: left end recorded, rest follows
        if (ga * gb < 0.0)
            roots.push_back(f.node_x(i) + f.h * ga / (ga - gb));
    }
    if (f.nx >= 1 && g(f.nx - 1) == 0.0)
        roots.push_back(f.node_x(f.nx - 1));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

struct Candidate {
    Vector x;
    double residual = kInf;
    bool better_than(const Candidate& o) const {
        if (residual != o.residual)
            return residual < o.residual;
        if (x.x() != o.x.x())
            return x.x() < o.x.x();
        return x.dim() == 2 && x.y() < o.x.y();
    }
};

inline std::optional<Candidate> best_candidate(const FrozenOperator& T,
                                               const std::vector<Vector>& xs) {
    std::optional<Candidate> best;
    for (const Vector& x : xs) {
        Candidate c{x, T.residual(x)};
        if (!best || c.better_than(*best))
            best = c;
    }
    return best;
}

} // namespace detail

/// The shrinking-enlargement loop: at each n, build the eps_n selection on
/// the invariant K,
/// locate its fixed points (sign-change bisection on the piecewise-linear
/// g = f - x in 1D, damped iteration with grid restarts in 2D), widen the
/// candidate pool with the exact fixed-point set where d = 1 allows it, and
/// return the first candidate whose independently recomputed residual makes
/// tol. Ties break toward smaller residual, then smaller coordinates.
inline SolveReport solve_fixed_point(const FrozenOperator& T, const ValueSet& C, int n0,
                                     double tol, int n_max, int verify_grid = 10000) {
    SolveReport report;
    const InvariantCompact inv = find_invariant_compact(T.op(), T.omega(), C, n0);
    const Box K = bounding_box(inv.K);

    std::optional<detail::Candidate> exact;
    if (T.dim() == 1) {
        const FlaggedSet fixed =
            T.approximate_fixed_set(FlaggedInterval{K.lo[0], K.hi[0], true, true}, 0.0);
        if (const auto m = fixed.min_element())
            exact = detail::Candidate{Vector(*m), T.residual(Vector(*m))};
    }

    double best_res = kInf;
    for (int n = 1; n <= n_max; ++n) {
        const double eps_n = 1.0 / (n + n0 - 1.0);
        report.epsilon_schedule.push_back(eps_n);
        SelectionField field;
        try {
            field = build_approximate_selection(T, K, eps_n, verify_grid);
        } catch (const std::exception& ex) {
            report.message = ex.what();
            return report;
        }
        std::vector<Vector> candidates;
        if (T.dim() == 1) {
            for (double r : detail::selection_roots_1d(field))
                candidates.emplace_back(r);
        } else {
            for (int gx = 0; gx < 4; ++gx)
                for (int gy = 0; gy < 4; ++gy) {
                    Vector x(K.lo[0] + (K.hi[0] - K.lo[0]) * (gx + 0.5) / 4.0,
                             K.lo[1] + (K.hi[1] - K.lo[1]) * (gy + 0.5) / 4.0);
                    for (int it = 0; it < 256; ++it) {
                        const Vector fx = field.evaluate(x);
                        const Vector next = 0.5 * x + 0.5 * fx;
                        if (distance(next, x) <= 1e-14)
                            break;
                        Vector clamped = next;
                        for (int c = 0; c < 2; ++c)
                            clamped[c] = std::clamp(clamped[c], K.lo[static_cast<std::size_t>(c)],
                                                    K.hi[static_cast<std::size_t>(c)]);
                        x = clamped;
                    }
                    if (distance(field.evaluate(x), x) <= 1e-9)
                        candidates.push_back(x);
                }
        }
        auto best = detail::best_candidate(T, candidates);
        if (exact && (!best || exact->better_than(*best)))
            best = exact;
        if (!best) {
            report.message = "Brouwer step failed";
            return report;
        }
        best_res = std::min(best_res, best->residual);
        report.trace.push_back({n, eps_n, best->x, best->residual, best_res});
        if (best->residual <= tol) {
            report.success = true;
            report.fixed_point = best->x;
            report.residual = best->residual;
            report.iterations = n;
            return report;
        }
    }
    const auto handle = std::min_element(
        report.trace.begin(), report.trace.end(),
        [](const TraceEntry& a, const TraceEntry& b) { return a.residual < b.residual; });
    if (handle != report.trace.end()) {
        report.fixed_point = handle->x;
        report.residual = handle->residual;
        report.iterations = n_max;
    }
    report.message = "no fixed point within tolerance";
    return report;
}

// ---------------------------------------------------------------------------
// brute-force oracle

struct OracleScan {
    double min_residual = kInf;
    double resolution = 0.0;
    double slack = 0.0;
    std::vector<std::pair<Vector, double>> minima; // all cells within slack of min
    long long evaluated = 0;
};

/// Exhaustive residual scan on a uniform grid, widened by the operator's
/// declared breakpoints so needle-thin pieces are not skipped. Returns every
/// probe within `slack` (default: the resolution) of the global minimum.
inline OracleScan oracle_scan(const FrozenOperator& T, const ValueSet& K, double resolution,
                              double slack = -1.0) {
    if (!(resolution > 0.0))
        throw std::invalid_argument("resolution must be positive");
    OracleScan out;
    out.resolution = resolution;
    out.slack = slack >= 0.0 ? slack : resolution;
    const Box bb = bounding_box(K);
    std::vector<Vector> probes;
    if (T.dim() == 1) {
        const int n = std::max(1, static_cast<int>(std::ceil((bb.hi[0] - bb.lo[0]) / resolution)));
        for (int i = 0; i <= n; ++i)
            probes.emplace_back(std::min(bb.lo[0] + i * resolution, bb.hi[0]));
        for (double x : detail::breakpoints_1d(T))
            if (x >= bb.lo[0] && x <= bb.hi[0])
                probes.emplace_back(x);
        for (const OperatorPiece& p : T.op().pieces)
            if (p.pred.is_points())
                for (const Vector& q : p.pred.points)
                    if (bb.contains(q))
                        probes.push_back(q);
    } else {
        const int nx = std::max(1, static_cast<int>(std::ceil((bb.hi[0] - bb.lo[0]) / resolution)));
        const int ny = std::max(1, static_cast<int>(std::ceil((bb.hi[1] - bb.lo[1]) / resolution)));
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                probes.emplace_back(std::min(bb.lo[0] + i * resolution, bb.hi[0]),
                                    std::min(bb.lo[1] + j * resolution, bb.hi[1]));
    }
    std::vector<std::pair<Vector, double>> all;
    all.reserve(probes.size());
    for (const Vector& x : probes) {
        if (!set_contains(K, x))
            continue;
        const double r = T.residual(x);
        ++out.evaluated;
        out.min_residual = std::min(out.min_residual, r);
        all.emplace_back(x, r);
    }
    for (const auto& [x, r] : all)
        if (r <= out.min_residual + out.slack)
            out.minima.emplace_back(x, r);
    std::sort(out.minima.begin(), out.minima.end(), [](const auto& a, const auto& b) {
        return a.first.x() < b.first.x() || (a.first.x() == b.first.x() && a.first.y() < b.first.y());
    });
    out.minima.erase(std::unique(out.minima.begin(), out.minima.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     out.minima.end());
    return out;
}

// ---------------------------------------------------------------------------
// homotopy along (1 - 1/n) T

struct HomotopyStep {
    int n = 0;
    double xi = 0.0;
    double eta = 0.0;
    double gap = 0.0;
    double residual = 0.0; // of xi against the unscaled operator
};

/// Solves xi_n in (1 - 1/n) T(w, xi_n) exactly for n = 2..N, recovers
/// eta_n = xi_n / (1 - 1/n), verifies the membership and the O(1/n) gap.
inline std::vector<HomotopyStep> homotopy_solve(const FrozenOperator& T, const ValueSet& C,
                                                int N) {
    if (T.dim() != 1)
        throw std::invalid_argument("homotopy requires d=1");
    if (N < 2)
        throw std::invalid_argument("homotopy needs N >= 2");
    const Box cb = bounding_box(C);
    const double diam = cb.hi[0] - cb.lo[0];
    std::vector<HomotopyStep> steps;
    for (int n = 2; n <= N; ++n) {
        const double s = 1.0 - 1.0 / n;
        const FrozenOperator scaled(T.op(), T.omega(), s * T.scale());
        const FlaggedSet fixed =
            scaled.approximate_fixed_set(FlaggedInterval{cb.lo[0], cb.hi[0], true, true}, 0.0);
        const auto m = fixed.min_element();
        if (!m)
            throw NoFixedPointError("scaled solve failed at n = " + std::to_string(n));
        HomotopyStep step;
        step.n = n;
        step.xi = *m;
        step.eta = *m / s;
        step.gap = std::abs(step.xi - step.eta);
        step.residual = T.residual(Vector(step.xi));
        if (!set_contains(T.evaluate(Vector(step.xi)), Vector(step.eta), 1e-12))
            throw NoFixedPointError("eta recovery left the value set at n = " + std::to_string(n));
        if (step.gap > diam / n + 1e-12)
            throw NoFixedPointError("homotopy gap bound violated at n = " + std::to_string(n));
        steps.push_back(step);
    }
    return steps;
}

// ---------------------------------------------------------------------------
// boundary conditions at x on the unit sphere

enum class BoundaryCondition { i, ii, iii, iv, v, vi };

inline std::string condition_name(BoundaryCondition c) {
    switch (c) {
    case BoundaryCondition::i:
        return "i";
    case BoundaryCondition::ii:
        return "ii";
    case BoundaryCondition::iii:
        return "iii";
    case BoundaryCondition::iv:
        return "iv";
    case BoundaryCondition::v:
        return "v";
    case BoundaryCondition::vi:
        return "vi";
    }
    return "?";
}

inline std::optional<BoundaryCondition> condition_from_name(const std::string& s) {
    if (s == "i")
        return BoundaryCondition::i;
    if (s == "ii")
        return BoundaryCondition::ii;
    if (s == "iii")
        return BoundaryCondition::iii;
    if (s == "iv")
        return BoundaryCondition::iv;
    if (s == "v")
        return BoundaryCondition::v;
    if (s == "vi")
        return BoundaryCondition::vi;
    return std::nullopt;
}

struct BoundaryVerdict {
    BoundaryCondition condition = BoundaryCondition::i;
    bool holds = false;
    std::optional<Vector> witness_y;
    std::optional<Vector> witness_z;
    std::optional<double> witness_lambda;
    std::optional<double> witness_gamma;
    std::optional<double> witness_beta;
    std::string detail;
};

struct BoundaryParams {
    const ValueSet* values = nullptr; // the full T(w, x), for iii) and iv)
    int witness_grid = 256;
    double tol_boundary = kBoundaryTol;
};

namespace detail {

/// Does the open ray {mu x : mu > 1} meet S? Exact for the closed variants.
inline bool open_ray_meets(const Vector& x, const ValueSet& S) {
    if (S.dim() == 1) {
        const FlaggedSet s = FlaggedSet::from_value_set(S);
        const FlaggedInterval ray = x.x() > 0.0 ? FlaggedInterval{x.x(), kInf, false, false}
                                                : FlaggedInterval{-kInf, x.x(), false, false};
        return !s.intersect(ray).is_empty();
    }
    // z(t) = (1 + t) x, t > 0: find the t-interval meeting S per variant.
    if (const auto* ball = S.get_if<BallData>()) {
        const double r = ball->radius + S.inflation();
        // ||(1 + t) x - c||^2 <= r^2, quadratic in t
        const Vector d = x;
        const Vector m = x - ball->center;
        const Quadratic q(dot(m, m) - r * r, 2.0 * dot(m, d), dot(d, d));
        for (const auto& [lo, hi] : q.nonpositive_set())
            if (hi > 0.0)
                return true;
        return false;
    }
    if (const auto* hs = S.get_if<HalfSpaceData>()) {
        // <n, (1+t) x> = (1+t) a <= b for some t > 0
        const double a = dot(hs->normal, x);
        const double b = hs->offset + S.inflation();
        if (a < 0.0)
            return true; // heads ever deeper into the half-space
        if (a == 0.0)
            return b >= 0.0;
        return a < b; // increasing in t, infimum a at t -> 0+
    }
    // bounded variants: minimize d((1+t) x, S) over a fine t-grid with local
    // refinement; the distance along the ray is convex for convex S.
    double t_hi = 4.0;
    if (set_bounded(S)) {
        const Box bb = bounding_box(S);
        double far = 0.0;
        for (const Vector& c : bb.corners())
            far = std::max(far, c.norm());
        t_hi = std::max(1.0, far / std::max(x.norm(), 1e-12));
    }
    constexpr double t_eps = 1e-15;
    double lo = t_eps, hi = t_hi, best = kInf;
    for (int pass = 0; pass < 4; ++pass) {
        double best_t = lo;
        const int steps = 512;
        for (int i = 0; i <= steps; ++i) {
            const double t = lo + (hi - lo) * i / steps;
            const double d = set_distance((1.0 + t) * x, S);
            if (d < best) {
                best = d;
                best_t = t;
            }
        }
        const double span = (hi - lo) / steps;
        lo = std::max(t_eps, best_t - 2 * span);
        hi = best_t + 2 * span;
    }
    return best <= 1e-12;
}

} // namespace detail

/// One boundary condition at a point of the unit sphere, evaluated against the exact
/// value set (iii, iv) or the finite sample Y (i, ii, v, vi).
inline BoundaryVerdict check_boundary_condition(BoundaryCondition cond, const Vector& x,
                                                const std::vector<Vector>& Y,
                                                const BoundaryParams& params) {
    if (std::abs(x.norm() - 1.0) > params.tol_boundary)
        throw std::domain_error("boundary condition checked off the unit sphere");
    BoundaryVerdict out;
    out.condition = cond;
    switch (cond) {
    case BoundaryCondition::i: {
        for (const Vector& y : Y) {
            const double d_inward = inward_distance(y, x);
            const double d_x = distance(y, x);
            if (!(d_inward < d_x)) {
                out.holds = false;
                out.witness_y = y;
                out.detail = "no z in the inward closure beats ||y - x||";
                return out;
            }
        }
        out.holds = true;
        if (!Y.empty()) {
            const Vector y = Y.front();
            // projection onto the tangent half-space as the witness z
            const double over = std::max(0.0, dot(y - x, x));
            out.witness_y = y;
            out.witness_z = y - over * x;
        }
        out.detail = "strict improvement inside the inward closure for every sample";
        return out;
    }
    case BoundaryCondition::ii: {
        for (const Vector& y : Y) {
            // lambda x + (1 - lambda) y in the half-space iff <y - x, x> <= 0,
            // independently of |lambda| < 1
            if (dot(y - x, x) > 0.0) {
                out.holds = false;
                out.witness_y = y;
                out.detail = "lambda interval empty";
                return out;
            }
        }
        out.holds = true;
        out.witness_lambda = 0.0;
        out.detail = "lambda = 0 works for every sample";
        return out;
    }
    case BoundaryCondition::iii: {
        if (!params.values)
            throw std::invalid_argument("condition iii needs the full value set");
        const ValueSet half = inward_set_closure(x, params.tol_boundary);
        out.holds = set_contained_in(*params.values, half);
        out.detail = out.holds ? "value set inside the inward closure (support test)"
                               : "value set sticks out of the inward closure";
        return out;
    }
    case BoundaryCondition::iv: {
        if (!params.values)
            throw std::invalid_argument("condition iv needs the full value set");
        const bool meets = detail::open_ray_meets(x, *params.values);
        out.holds = !meets;
        out.detail = meets ? "the ray {mu x : mu > 1} meets T(w, x)"
                           : "the ray {mu x : mu > 1} misses T(w, x)";
        return out;
    }
    case BoundaryCondition::v: {
        for (const Vector& y : Y) {
            const double a = y.norm();
            const double b = distance(y, x);
            bool found = false;
            if (a <= 1.0) {
                out.witness_gamma = 2.0;
                found = true; // a^g - 1 <= 0 <= b^g
            } else {
                for (int i = 1; i <= params.witness_grid && !found; ++i) {
                    const double g =
                        std::exp(std::log(64.0) * i / params.witness_grid); // (1, 64]
                    if (std::pow(a, g) - 1.0 <= std::pow(b, g)) {
                        out.witness_gamma = g;
                        found = true;
                    }
                }
                if (!found) {
                    // monotone analysis near gamma = 1: g(1) = a - 1 - b and
                    // g'(1) = a ln a - b ln b decide the sign for gamma > 1
                    const double g1 = a - 1.0 - b;
                    const double dg1 = a * std::log(a) - (b > 0.0 ? b * std::log(b) : 0.0);
                    out.detail = "no witness on the log grid; at gamma -> 1+: value " +
                                 std::to_string(g1) + ", slope " + std::to_string(dg1);
                }
            }
            if (!found) {
                out.holds = false;
                out.witness_y = y;
                return out;
            }
        }
        out.holds = true;
        out.detail = "witness gamma found for every sample";
        return out;
    }
    case BoundaryCondition::vi: {
        for (const Vector& y : Y) {
            const double a = y.norm();
            const double b = distance(y, x);
            bool found = false;
            for (int i = 1; i <= params.witness_grid && !found; ++i) {
                const double beta = static_cast<double>(i) / (params.witness_grid + 1); // (0,1)
                if (std::pow(a, beta) - 1.0 >= std::pow(b, beta)) {
                    out.witness_beta = beta;
                    found = true;
                }
            }
            if (!found) {
                out.holds = false;
                out.witness_y = y;
                out.detail = "no witness beta on the grid (norm side too small)";
                return out;
            }
        }
        out.holds = true;
        out.detail = "witness beta found for every sample";
        return out;
    }
    }
    return out;
}

} // namespace svfix
