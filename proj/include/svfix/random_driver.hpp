#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "svfix/continuity.hpp"
#include "svfix/correspondence.hpp"
#include "svfix/noncompactness.hpp"
#include "svfix/parallel.hpp"
#include "svfix/solver.hpp"
#include "svfix/unit_ball.hpp"

namespace svfix {

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverParams {
    double tol = 1e-9;
    int n_max = 256;
    int grid = 10000;
    double oracle_resolution = 1e-4;
    int homotopy_steps = 64;
    double continuity_eps = 1e-3;
};

/// One representative of the omega layer: a partition cell or an atom.
struct RepResult {
    int index = 0;
    bool atom = false;
    double omega = 0.0;
    Vector xi;
    double residual = 0.0;
};

/// Piecewise-constant (hence simple, hence measurable) selection over the
/// partition, atoms handled separately.
struct RandomSelection {
    OmegaPartition partition;
    bool uniform = false;
    Vector uniform_value;
    std::vector<RepResult> cells;
    std::vector<RepResult> atoms;
    double sup_residual = 0.0;
    std::string measurability;

    std::vector<const RepResult*> all() const {
        std::vector<const RepResult*> out;
        for (const auto& c : cells)
            out.push_back(&c);
        for (const auto& a : atoms)
            out.push_back(&a);
        return out;
    }
};

struct HypothesisCertificates {
    int n0 = 0;
    bool alsc_certified = false;
    bool inverse_closed = false;
    bool all_condensing_or_contractive = false;
    bool invariant_verified = false;
    std::string continuity_detail;
    std::string inverse_detail;
    std::string classification_detail;
    std::vector<std::string> notes;
};

struct RandomSolveResult {
    RandomSelection selection;
    HypothesisCertificates certificates;
};

namespace detail {

struct Rep {
    int index;
    bool atom;
    double omega;
};

inline std::vector<Rep> representatives(const OmegaPartition& P) {
    std::vector<Rep> reps;
    for (int k = 0; k < P.cells; ++k)
        reps.push_back({k, false, P.representative(k)});
    for (std::size_t j = 0; j < P.atoms.size(); ++j)
        reps.push_back({static_cast<int>(j), true, P.atoms[j]});
    return reps;
}

inline std::string rep_label(const Rep& r) {
    return (r.atom ? "atom " : "cell ") + std::to_string(r.index) +
           " (omega = " + std::to_string(r.omega) + ")";
}

} // namespace detail

/// Certifies the solver hypotheses per representative, then solves:
/// omega-uniform fixed point first (intersection of the exact per-omega
/// fixed-point sets, smallest element), per-cell solve otherwise.
inline RandomSolveResult random_solve(const RandomOperator& T, const OmegaPartition& P,
                                      const ValueSet& C, const SolverParams& params) {
    RandomSolveResult out;
    out.selection.partition = P;
    const auto reps = detail::representatives(P);

    // hemicompactness premise first: nonempty fixed-point sets, brute-force checked.
    // An empty F(omega) is the most informative failure, so it wins over the
    // n0 hypothesis.
    std::vector<FlaggedSet> exact_sets(reps.size());
    const Box cb = bounding_box(C);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const FrozenOperator frozen(T, reps[i].omega);
        const auto scan = oracle_scan(frozen, C, params.oracle_resolution);
        bool exact_empty = true;
        if (T.dim == 1) {
            exact_sets[i] = frozen.approximate_fixed_set(
                FlaggedInterval{cb.lo[0], cb.hi[0], true, true}, 0.0);
            exact_empty = exact_sets[i].is_empty();
        } else {
            exact_empty = scan.min_residual > params.tol;
        }
        if (exact_empty && scan.min_residual > params.tol)
            throw NoFixedPointError("F(omega) empty at " + detail::rep_label(reps[i]) +
                                    ": oracle min residual " + std::to_string(scan.min_residual));
    }

    // hypotheses
    try {
        out.certificates.n0 = find_n0(T, P, C);
    } catch (const std::domain_error& ex) {
        throw NoFixedPointError(ex.what());
    }
    out.certificates.alsc_certified = T.dim == 1;
    out.certificates.inverse_closed = T.dim == 1;
    out.certificates.all_condensing_or_contractive = true;
    if (T.dim != 1)
        out.certificates.continuity_detail =
            "2D continuity certification is sampled only; not performed";
    const int continuity_grid = std::min(params.grid, 4096);
    for (const auto& rep : reps) {
        const FrozenOperator frozen(T, rep.omega);
        if (T.dim == 1) {
            const auto cont = certify_alsc(frozen, params.continuity_eps, continuity_grid);
            if (cont.refuted())
                throw NoFixedPointError("hypothesis failed: a.l.s.c. refuted at " +
                                        detail::rep_label(rep) + ", x = " +
                                        std::to_string(cont.witness ? cont.witness->x : 0.0));
            if (!cont.certified()) {
                out.certificates.alsc_certified = false;
                out.certificates.continuity_detail = "inconclusive at " + detail::rep_label(rep);
            }
            const auto inv = certify_inverse_closed(T, rep.omega,
                                                    uniform_y_grid(frozen, 256));
            if (!inv.certified) {
                out.certificates.inverse_closed = false;
                out.certificates.inverse_detail = inv.detail + " at " + detail::rep_label(rep);
                throw NoFixedPointError("hypothesis failed: inverse not closed valued at " +
                                        detail::rep_label(rep));
            }
        }
        const auto cls = classify_map(frozen, C);
        if (cls.kind == ContractionClass::Kind::Unclassified ||
            (cls.kind == ContractionClass::Kind::KSetContractive && cls.k > 1.0 + 1e-12)) {
            out.certificates.all_condensing_or_contractive = false;
            out.certificates.classification_detail = cls.evidence + " at " + detail::rep_label(rep);
        }
    }
    if (out.certificates.continuity_detail.empty())
        out.certificates.continuity_detail =
            "a.l.s.c. certified at eps = " + std::to_string(params.continuity_eps) + " on " +
            std::to_string(reps.size()) + " representatives";
    if (out.certificates.inverse_detail.empty())
        out.certificates.inverse_detail = "inverse closed valued on all representatives";
    if (out.certificates.classification_detail.empty())
        out.certificates.classification_detail = "condensing on all representatives";

    // omega-uniform preference
    if (T.dim == 1) {
        FlaggedSet common = exact_sets.front();
        for (std::size_t i = 1; i < reps.size() && !common.is_empty(); ++i)
            common = common.intersect(exact_sets[i]);
        if (const auto m = common.min_element()) {
            const Vector x(*m);
            bool verified = true;
            double sup_res = 0.0;
            std::vector<double> residuals(reps.size());
            for (std::size_t i = 0; i < reps.size(); ++i) {
                residuals[i] = FrozenOperator(T, reps[i].omega).residual(x);
                sup_res = std::max(sup_res, residuals[i]);
                verified = verified && residuals[i] <= params.tol;
            }
            if (verified) {
                out.selection.uniform = true;
                out.selection.uniform_value = x;
                out.selection.sup_residual = sup_res;
                for (std::size_t i = 0; i < reps.size(); ++i) {
                    RepResult r{reps[i].index, reps[i].atom, reps[i].omega, x, residuals[i]};
                    (reps[i].atom ? out.selection.atoms : out.selection.cells).push_back(r);
                }
                out.selection.measurability =
                    "simple function (constant) on the " + std::to_string(P.cells) +
                    "-cell partition of [" + std::to_string(P.a) + ", " + std::to_string(P.b) +
                    "] plus " + std::to_string(P.atoms.size()) + " atoms";
                return out;
            }
        }
    }

    // per-cell solves
    std::vector<RepResult> results(reps.size());
    std::vector<std::string> failures(reps.size());
    parallel_for(static_cast<int>(reps.size()), [&](int i) {
        const auto& rep = reps[static_cast<std::size_t>(i)];
        const FrozenOperator frozen(T, rep.omega);
        const SolveReport sr =
            solve_fixed_point(frozen, C, out.certificates.n0, params.tol, params.n_max,
                              std::min(params.grid, 4000));
        if (!sr.success) {
            failures[static_cast<std::size_t>(i)] = sr.message;
            return;
        }
        results[static_cast<std::size_t>(i)] =
            RepResult{rep.index, rep.atom, rep.omega, sr.fixed_point, sr.residual};
    });
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (!failures[i].empty())
            throw NoFixedPointError(failures[i] + " at " + detail::rep_label(reps[i]));
    for (std::size_t i = 0; i < reps.size(); ++i) {
        out.selection.sup_residual = std::max(out.selection.sup_residual, results[i].residual);
        (reps[i].atom ? out.selection.atoms : out.selection.cells).push_back(results[i]);
    }
    bool same = true;
    for (const auto* r : out.selection.all())
        same = same && r->xi == out.selection.all().front()->xi;
    out.selection.uniform = same;
    if (same)
        out.selection.uniform_value = out.selection.all().front()->xi;
    out.selection.measurability =
        "simple function on the " + std::to_string(P.cells) + "-cell partition of [" +
        std::to_string(P.a) + ", " + std::to_string(P.b) + "] plus " +
        std::to_string(P.atoms.size()) + " atoms";
    return out;
}

// ---------------------------------------------------------------------------
// approximation pipeline

struct ApproximationCell {
    int index = 0;
    bool atom = false;
    double omega = 0.0;
    Vector xi;
    Vector eta;
    double d_pair = 0.0;
    double d_ball = 0.0;
    double d_inward = 0.0;
    double residual_xi = 0.0;
    bool membership = false;
    bool retraction = false;
    bool equalities = false;

    bool verified() const { return membership && retraction && equalities; }
};

struct ApproximationReport {
    OmegaPartition partition;
    std::vector<ApproximationCell> cells;
    std::vector<ApproximationCell> atoms;
    bool all_verified = false;
    double equality_tol = 1e-9;
    HypothesisCertificates certificates;

    std::vector<const ApproximationCell*> all() const {
        std::vector<const ApproximationCell*> out;
        for (const auto& c : cells)
            out.push_back(&c);
        for (const auto& a : atoms)
            out.push_back(&a);
        return out;
    }
};

namespace detail {

/// Splits one quadratic at its +-1 crossings inside (a, b) and returns the
/// clamped regime per subinterval: the exact 1D radial retraction of a
/// moving envelope bound.
inline std::vector<double> clamp_cuts(const Quadratic& q, double a, double b) {
    std::vector<double> cuts;
    for (double level : {-1.0, 1.0}) {
        const auto roots = q.shifted(-level).roots();
        for (double r : roots.values)
            if (r > a && r < b)
                cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

inline Quadratic clamp_regime(const Quadratic& q, double at) {
    const double v = q(at);
    if (v < -1.0)
        return Quadratic::constant(-1.0);
    if (v > 1.0)
        return Quadratic::constant(1.0);
    return q;
}

inline ValueSet clamp_set_1d(const ValueSet& s) {
    auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
    if (const auto* iv = s.get_if<IntervalUnionData>()) {
        std::vector<Box> boxes;
        for (const Box& b : iv->boxes)
            boxes.push_back(Box::interval(clamp1(b.lo[0] - s.inflation()),
                                          clamp1(b.hi[0] + s.inflation())));
        return ValueSet::interval_union(boxes);
    }
    if (const auto* pts = s.get_if<PointSetData>()) {
        std::vector<Vector> mapped;
        for (const Vector& p : pts->points)
            mapped.emplace_back(clamp1(p.x()));
        return ValueSet::points(mapped);
    }
    throw std::invalid_argument("cannot retract this 1D value variant");
}

} // namespace detail

/// G(w, .) = r o T(w, .), built exactly: 1D envelopes are clamped to [-1, 1]
/// with pieces split at the crossing points; 2D is supported when values
/// already live in B1 or are balls centered at the origin.
inline RandomOperator retract_operator(const RandomOperator& T) {
    if (!T.frame)
        throw std::invalid_argument("retraction pipeline needs a unit-ball frame");
    RandomOperator G;
    G.dim = T.dim;
    G.domain = T.domain;
    G.frame = T.frame;
    G.notes = T.notes;
    G.notes.push_back("radially retracted onto B1");
    if (T.dim == 2) {
        const ValueSet b1 = T.frame->inner_ball(2);
        for (const OperatorPiece& piece : T.pieces) {
            OperatorPiece g = piece;
            if (piece.value.kind == PieceValue::Kind::Constant) {
                const auto* ball = piece.value.constant.get_if<BallData>();
                if (ball && ball->center.norm() <= 1e-15) {
                    g.value = PieceValue::constant_set(ValueSet::ball(
                        ball->center,
                        std::min(1.0, ball->radius + piece.value.constant.inflation())));
                    G.pieces.push_back(g);
                    continue;
                }
                if (!set_contained_in(piece.value.constant, b1))
                    throw std::invalid_argument(
                        "2D retraction of protruding values is not exactly representable "
                        "(piece " + piece.id + ")");
            }
            G.pieces.push_back(g);
        }
        return G;
    }
    for (std::size_t pi = 0; pi < T.pieces.size(); ++pi) {
        const OperatorPiece& piece = T.pieces[pi];
        if (piece.pred.is_points()) {
            if (piece.value.kind == PieceValue::Kind::Constant) {
                OperatorPiece g = piece;
                g.value = PieceValue::constant_set(detail::clamp_set_1d(piece.value.constant));
                G.pieces.push_back(g);
            } else {
                // one singleton piece per point with the clamped value
                for (const Vector& q : piece.pred.points) {
                    OperatorPiece single;
                    single.pred = PiecePredicate::singleton({q});
                    single.id = piece.id + "/retracted@" + q.str();
                    single.value = PieceValue::constant_set(
                        detail::clamp_set_1d(piece.value.evaluate(q, 1.0)));
                    G.pieces.push_back(single);
                }
            }
            continue;
        }
        const double a = piece.pred.box.lo[0];
        const double b = piece.pred.box.hi[0];
        Quadratic lo, hi;
        switch (piece.value.kind) {
        case PieceValue::Kind::Point:
            lo = hi = piece.value.point_poly[0];
            break;
        case PieceValue::Kind::Interval:
            lo = piece.value.lo_poly[0];
            hi = piece.value.hi_poly[0];
            break;
        case PieceValue::Kind::Constant: {
            OperatorPiece g = piece;
            g.value = PieceValue::constant_set(detail::clamp_set_1d(piece.value.constant));
            G.pieces.push_back(g);
            continue;
        }
        }
        std::vector<double> cuts = detail::clamp_cuts(lo, a, b);
        for (double c : detail::clamp_cuts(hi, a, b))
            cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<double> edges{a};
        edges.insert(edges.end(), cuts.begin(), cuts.end());
        edges.push_back(b);
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double lo_x = edges[e], hi_x = edges[e + 1];
            OperatorPiece g;
            g.pred = PiecePredicate::interval(lo_x, hi_x,
                                              e == 0 ? piece.pred.lo_closed[0] : true,
                                              e + 2 == edges.size() ? piece.pred.hi_closed[0]
                                                                    : false);
            g.id = piece.id + "/retracted" + std::to_string(e);
            const double mid = std::isfinite(lo_x) && std::isfinite(hi_x)
                                   ? 0.5 * (lo_x + hi_x)
                                   : (std::isfinite(lo_x) ? lo_x + 1.0 : hi_x - 1.0);
            const Quadratic glo = detail::clamp_regime(lo, mid);
            const Quadratic ghi = detail::clamp_regime(hi, mid);
            if (piece.value.kind == PieceValue::Kind::Point)
                g.value = PieceValue::moving_point(glo);
            else
                g.value = PieceValue::moving_interval(glo, ghi);
            G.pieces.push_back(g);
        }
    }
    if (T.diagonal_default)
        G.diagonal_default = detail::clamp_set_1d(*T.diagonal_default);
    return G;
}

/// Validates the E(X, B1) frame: every value envelope must have its center
/// inside B1 (exact polynomial range tests in 1D).
inline std::vector<std::string> validate_frame_values(const RandomOperator& T) {
    std::vector<std::string> issues;
    if (!T.frame) {
        issues.push_back("approximation pipeline needs a unit-ball frame");
        return issues;
    }
    const double r1 = T.frame->radius_inner;
    if (T.dim != 1)
        return issues; // 2D checked structurally in retract_operator
    auto check_interval = [&](const Quadratic& lo, const Quadratic& hi, double a, double b,
                              const std::string& id) {
        const Quadratic center(0.5 * (lo.c0 + hi.c0), 0.5 * (lo.c1 + hi.c1),
                               0.5 * (lo.c2 + hi.c2));
        const auto range = center.range(a, b);
        if (range.first < -r1 - 1e-9 || range.second > r1 + 1e-9)
            issues.push_back("value centers leave B1 on piece " + id);
    };
    for (const OperatorPiece& piece : T.pieces) {
        double a, b;
        if (piece.pred.is_points()) {
            a = piece.pred.points.front().x();
            b = piece.pred.points.back().x();
        } else {
            a = piece.pred.box.lo[0];
            b = piece.pred.box.hi[0];
        }
        if (!std::isfinite(a) || !std::isfinite(b))
            continue;
        switch (piece.value.kind) {
        case PieceValue::Kind::Point:
            check_interval(piece.value.point_poly[0], piece.value.point_poly[0], a, b, piece.id);
            break;
        case PieceValue::Kind::Interval:
            check_interval(piece.value.lo_poly[0], piece.value.hi_poly[0], a, b, piece.id);
            break;
        case PieceValue::Kind::Constant: {
            const Box bb = bounding_box(piece.value.constant);
            if (0.5 * (bb.lo[0] + bb.hi[0]) < -r1 - 1e-9 ||
                0.5 * (bb.lo[0] + bb.hi[0]) > r1 + 1e-9)
                issues.push_back("value center leaves B1 on piece " + piece.id);
            break;
        }
        }
    }
    if (T.diagonal_default) {
        const Box bb = bounding_box(*T.diagonal_default);
        const double c = 0.5 * (bb.lo[0] + bb.hi[0]);
        if (c < -r1 - 1e-9 || c > r1 + 1e-9)
            issues.push_back("diagonal default center leaves B1");
    }
    return issues;
}

namespace detail {

/// eta in the retraction fiber of xi intersected with V, minimizing the
/// distance to xi. Fiber: {xi} for interior xi, the outward ray at boundary.
inline Vector recover_eta_1d(const Vector& xi, const ValueSet& V, double tol_boundary) {
    const double n = std::abs(xi.x());
    if (n < 1.0 - tol_boundary) {
        if (set_contains(V, xi, 1e-12))
            return xi;
        throw VerificationError("retraction fiber miss");
    }
    const FlaggedSet values = FlaggedSet::from_value_set(V);
    const FlaggedInterval ray = xi.x() > 0.0 ? FlaggedInterval{xi.x(), kInf, true, false}
                                             : FlaggedInterval{-kInf, xi.x(), false, true};
    const FlaggedSet hit = values.intersect(ray);
    if (hit.is_empty())
        throw VerificationError("retraction fiber miss");
    double best = kInf;
    double eta = xi.x();
    for (const auto& part : hit.parts()) {
        for (double cand : {part.lo, part.hi}) {
            if (!std::isfinite(cand) || !part.contains(cand))
                continue;
            const double d = std::abs(cand - xi.x());
            if (d < best) {
                best = d;
                eta = cand;
            }
        }
        if (part.contains(xi.x()))
            return xi;
    }
    return Vector(eta);
}

inline ApproximationCell make_approximation_cell(const RandomOperator& T, const Rep& rep,
                                                 const Vector& xi, const Vector& eta,
                                                 double equality_tol) {
    const FrozenOperator frozen(T, rep.omega);
    const ValueSet V = frozen.evaluate(xi);
    const UnitBallFrame frame = T.frame.value_or(UnitBallFrame{});
    ApproximationCell cell;
    cell.index = rep.index;
    cell.atom = rep.atom;
    cell.omega = rep.omega;
    cell.xi = xi;
    cell.eta = eta;
    cell.d_pair = distance(eta, xi);
    cell.d_ball = set_distance(eta, frame.inner_ball(T.dim));
    cell.d_inward = inward_distance(eta, xi);
    cell.residual_xi = set_distance(xi, V);
    cell.membership = set_contains(V, eta, 1e-12);
    cell.retraction = distance(radial_retraction(eta), xi) <= 1e-12;
    cell.equalities = std::abs(cell.d_pair - cell.d_ball) <= equality_tol &&
                      std::abs(cell.d_ball - cell.d_inward) <= equality_tol;
    return cell;
}

} // namespace detail

/// Approximation pipeline: solve xi in r(T(w, xi)) through the retracted
/// operator, recover eta from the retraction fiber, report the three
/// distances and the equality verdicts.
inline ApproximationReport random_approximation(const RandomOperator& T, const OmegaPartition& P,
                                                const SolverParams& params) {
    // Center violations are recorded, not fatal: the retraction pipeline is
    // well defined for any bounded values, and the worked protruding-ball
    // scenarios live outside the literal E(X, B1) frame.
    const auto issues = validate_frame_values(T);
    if (!T.frame)
        throw std::invalid_argument("frame validation failed: " + issues.front());
    const RandomOperator G = retract_operator(T);
    const RandomSolveResult solved = random_solve(G, P, G.domain, params);

    ApproximationReport report;
    report.partition = P;
    report.equality_tol = params.tol;
    report.certificates = solved.certificates;
    for (const auto& issue : issues)
        report.certificates.notes.push_back("frame: " + issue);
    const auto reps = detail::representatives(P);
    auto xi_of = [&](const detail::Rep& rep) -> const Vector& {
        if (rep.atom)
            return solved.selection.atoms[static_cast<std::size_t>(rep.index)].xi;
        return solved.selection.cells[static_cast<std::size_t>(rep.index)].xi;
    };
    bool all = true;
    for (const auto& rep : reps) {
        const Vector xi = xi_of(rep);
        const FrozenOperator frozen(T, rep.omega);
        const Vector eta = T.dim == 1
                               ? detail::recover_eta_1d(xi, frozen.evaluate(xi), kBoundaryTol)
                               : xi; // 2D values live in B1 after validation
        auto cell = detail::make_approximation_cell(T, rep, xi, eta, params.tol);
        all = all && cell.verified();
        (rep.atom ? report.atoms : report.cells).push_back(cell);
    }
    report.all_verified = all;
    return report;
}

/// Re-verifies a given (xi, eta) pair against the operator: membership, the
/// retraction relation, and the three distance identities. eta defaults
/// to xi, which turns the check into random fixed-point verification.
inline ApproximationReport verify_pair(const RandomOperator& T, const OmegaPartition& P,
                                       const Vector& xi, std::optional<Vector> eta,
                                       const SolverParams& params) {
    ApproximationReport report;
    report.partition = P;
    report.equality_tol = params.tol;
    const Vector eta_v = eta.value_or(xi);
    bool all = true;
    for (const auto& rep : detail::representatives(P)) {
        auto cell = detail::make_approximation_cell(T, rep, xi, eta_v, params.tol);
        all = all && cell.verified();
        (rep.atom ? report.atoms : report.cells).push_back(cell);
    }
    report.all_verified = all;
    return report;
}

// ---------------------------------------------------------------------------
// condition-M homotopy

struct HomotopyCellResult {
    int index = 0;
    bool atom = false;
    double omega = 0.0;
    std::vector<HomotopyStep> steps;
    double limit = 0.0;
    double limit_residual = 0.0;
    double max_gap_times_n = 0.0;
};

struct HomotopyRandomResult {
    RandomSelection selection;
    std::vector<HomotopyCellResult> cells; // cells then atoms, rep order
    bool premise_certified = false;        // gap_n * n <= diam(C) everywhere
    double diam_c = 0.0;
    std::string classification;
};

/// Condition-M driver: per-cell homotopy along (1 - 1/n) T, the premise
/// certificate, and the Cauchy limit whose residual is re-verified.
inline HomotopyRandomResult homotopy_random(const RandomOperator& T, const OmegaPartition& P,
                                            const ValueSet& C, int N, const SolverParams& params) {
    if (T.dim != 1)
        throw std::invalid_argument("homotopy requires d=1");
    HomotopyRandomResult out;
    out.selection.partition = P;
    out.diam_c = set_diameter(C);
    const auto reps = detail::representatives(P);
    // the deformation needs gauge(T(A)) <= gauge(A): condensing or k <= 1
    for (const auto& rep : reps) {
        const auto cls = classify_map(FrozenOperator(T, rep.omega), C);
        if (cls.kind == ContractionClass::Kind::Unclassified ||
            (cls.kind == ContractionClass::Kind::KSetContractive && cls.k > 1.0 + 1e-12))
            throw std::invalid_argument("homotopy requires a 1-set-contractive operator: " +
                                        cls.evidence + " at " + detail::rep_label(rep));
        if (out.classification.empty())
            out.classification = cls.evidence;
    }
    std::vector<HomotopyCellResult> cells(reps.size());
    std::vector<std::string> failures(reps.size());
    parallel_for(static_cast<int>(reps.size()), [&](int i) {
        const auto& rep = reps[static_cast<std::size_t>(i)];
        HomotopyCellResult& cell = cells[static_cast<std::size_t>(i)];
        cell.index = rep.index;
        cell.atom = rep.atom;
        cell.omega = rep.omega;
        try {
            const FrozenOperator frozen(T, rep.omega);
            cell.steps = homotopy_solve(frozen, C, N);
            for (const auto& s : cell.steps)
                cell.max_gap_times_n = std::max(cell.max_gap_times_n, s.gap * s.n);
            // Cauchy extraction on the tail, at the O(1/n) rate the gap
            // bound guarantees
            const int window = std::min<int>(8, static_cast<int>(cell.steps.size()) - 1);
            const double tail = cell.steps.back().xi;
            auto rate_bound = [&](int w) {
                return std::max(16.0 * params.tol,
                                8.0 * out.diam_c * w / (static_cast<double>(N) * (N - w)));
            };
            bool cauchy = true;
            for (int w = 1; w <= window; ++w)
                cauchy = cauchy &&
                         std::abs(cell.steps[cell.steps.size() - 1 - w].xi - tail) <=
                             rate_bound(w);
            double limit = tail;
            if (!cauchy) {
                // retry on the best-residual subsequence
                auto sorted = cell.steps;
                std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
                    return a.residual < b.residual;
                });
                const int keep = std::min<int>(8, static_cast<int>(sorted.size()));
                double lo = kInf, hi = -kInf;
                for (int k = 0; k < keep; ++k) {
                    lo = std::min(lo, sorted[static_cast<std::size_t>(k)].xi);
                    hi = std::max(hi, sorted[static_cast<std::size_t>(k)].xi);
                }
                if (hi - lo > rate_bound(window))
                    throw NoFixedPointError("no convergent subsequence found at N = " +
                                            std::to_string(N));
                limit = sorted.front().xi;
            }
            // The sequence converges into the closed fixed-point set, so the
            // true limit is its nearest point within the tail radius.
            const Box cw = bounding_box(C);
            const FlaggedSet fixed = frozen.approximate_fixed_set(
                FlaggedInterval{cw.lo[0], cw.hi[0], true, true}, 0.0);
            const double tail_radius = 2.0 * out.diam_c / N + 1e-12;
            double best_gap = kInf, snapped = limit;
            for (const auto& part : fixed.parts()) {
                double cand;
                if (part.contains(limit))
                    cand = limit;
                else if (limit < part.lo)
                    cand = part.lo_closed ? part.lo
                                          : part.lo + std::min(1e-12, 0.5 * (part.hi - part.lo));
                else
                    cand = part.hi_closed ? part.hi
                                          : part.hi - std::min(1e-12, 0.5 * (part.hi - part.lo));
                if (!part.contains(cand))
                    continue;
                const double gap = std::abs(cand - limit);
                if (gap < best_gap) {
                    best_gap = gap;
                    snapped = cand;
                }
            }
            if (best_gap <= tail_radius)
                limit = snapped;
            cell.limit = limit;
            cell.limit_residual = frozen.residual(Vector(limit));
            if (cell.limit_residual > params.tol)
                throw NoFixedPointError("homotopy limit residual " +
                                        std::to_string(cell.limit_residual) + " above tol");
        } catch (const std::exception& ex) {
            failures[static_cast<std::size_t>(i)] = ex.what();
        }
    });
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (!failures[i].empty())
            throw NoFixedPointError(failures[i] + " at " + detail::rep_label(reps[i]));
    out.premise_certified = true;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& cell = cells[i];
        out.premise_certified =
            out.premise_certified && cell.max_gap_times_n <= out.diam_c + 1e-12;
        RepResult r{reps[i].index, reps[i].atom, reps[i].omega, Vector(cell.limit),
                    cell.limit_residual};
        out.selection.sup_residual = std::max(out.selection.sup_residual, r.residual);
        (reps[i].atom ? out.selection.atoms : out.selection.cells).push_back(r);
    }
    out.cells = std::move(cells);
    bool same = true;
    for (const auto* r : out.selection.all())
        same = same && r->xi == out.selection.all().front()->xi;
    out.selection.uniform = same;
    if (same)
        out.selection.uniform_value = out.selection.all().front()->xi;
    out.selection.measurability = "simple function on the partition (homotopy limits)";
    return out;
}

// ---------------------------------------------------------------------------
// boundary-condition driver

struct BoundaryCellOutcome {
    int index = 0;
    bool atom = false;
    double omega = 0.0;
    double d_inward = 0.0;
    bool already_fixed = false;
    std::vector<BoundaryVerdict> verdicts;
    bool contradiction = false; // some declared condition holds at a non-fixed pair
};

struct BoundaryRandomResult {
    bool applicable = false;
    RandomSelection selection;
    ApproximationReport approximation;
    std::vector<BoundaryCellOutcome> outcomes;
    std::string message;
};

/// Boundary-condition driver: approximation first; where the inward distance is
/// positive, the declared conditions are tested at xi on the unit sphere. A
/// holding condition contradicts non-fixedness, so the driver re-solves for
/// the true fixed point; no holding condition means the theorem just does
/// not apply to the scenario.
inline BoundaryRandomResult boundary_random(const RandomOperator& T, const OmegaPartition& P,
                                            const std::vector<BoundaryCondition>& conditions,
                                            const SolverParams& params) {
    BoundaryRandomResult out;
    out.approximation = random_approximation(T, P, params);
    out.selection.partition = P;
    const auto reps = detail::representatives(P);
    const auto all_cells = out.approximation.all();
    bool need_resolve = false;
    bool inapplicable = false;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const ApproximationCell& ap = *all_cells[i];
        BoundaryCellOutcome oc;
        oc.index = ap.index;
        oc.atom = ap.atom;
        oc.omega = ap.omega;
        oc.d_inward = ap.d_inward;
        oc.already_fixed = ap.d_inward <= params.tol && ap.residual_xi <= params.tol;
        if (!oc.already_fixed) {
            const FrozenOperator frozen(T, ap.omega);
            const ValueSet V = frozen.evaluate(ap.xi);
            const std::vector<Vector> Y = sample_value_set(V, 64);
            BoundaryParams bp;
            bp.values = &V;
            for (BoundaryCondition cond : conditions)
                oc.verdicts.push_back(check_boundary_condition(cond, ap.xi, Y, bp));
            for (const auto& v : oc.verdicts)
                oc.contradiction = oc.contradiction || v.holds;
            if (oc.contradiction)
                need_resolve = true;
            else
                inapplicable = true;
        }
        out.outcomes.push_back(std::move(oc));
    }
    if (inapplicable) {
        out.applicable = false;
        out.message = "theorem inapplicable: no declared condition holds at a non-fixed pair";
        return out;
    }
    if (!need_resolve) {
        // every pair is already a fixed point
        for (std::size_t i = 0; i < reps.size(); ++i) {
            const ApproximationCell& ap = *all_cells[i];
            RepResult r{ap.index, ap.atom, ap.omega, ap.xi, ap.residual_xi};
            out.selection.sup_residual = std::max(out.selection.sup_residual, r.residual);
            (ap.atom ? out.selection.atoms : out.selection.cells).push_back(r);
        }
        bool same = true;
        for (const auto* r : out.selection.all())
            same = same && r->xi == out.selection.all().front()->xi;
        out.selection.uniform = same;
        if (same)
            out.selection.uniform_value = out.selection.all().front()->xi;
        out.selection.measurability = "simple function on the partition (approximation pairs)";
        out.applicable = true;
        out.message = "fixed point certified through the approximation pair";
        return out;
    }
    // contradiction: a true fixed point exists; find it on T directly
    const RandomSolveResult solved = random_solve(T, P, T.domain, params);
    out.selection = solved.selection;
    out.applicable = true;
    out.message = "boundary condition held at a non-fixed pair; re-solved on T";
    return out;
}

} // namespace svfix
