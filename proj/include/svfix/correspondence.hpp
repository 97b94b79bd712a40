#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svfix/flagged_intervals.hpp"
#include "svfix/quadratic.hpp"
#include "svfix/unit_ball.hpp"
#include "svfix/value_set.hpp"
#include "svfix/vector.hpp"

namespace svfix {

/// Case row guard: a box with per-edge openness, or a finite point list.
struct PiecePredicate {
    Box box;
    std::array<bool, 2> lo_closed{true, true};
    std::array<bool, 2> hi_closed{true, true};
    std::vector<Vector> points; // when nonempty the predicate is this list

    static PiecePredicate interval(double a, double b, bool a_closed, bool b_closed) {
        PiecePredicate p;
        p.box = Box::interval(a, b);
        p.lo_closed[0] = a_closed;
        p.hi_closed[0] = b_closed;
        return p;
    }
    static PiecePredicate singleton(std::vector<Vector> pts) {
        PiecePredicate p;
        p.points = std::move(pts);
        return p;
    }

    bool is_points() const { return !points.empty(); }

    bool contains(const Vector& x) const {
        if (is_points()) {
            for (const Vector& p : points)
                if (p == x)
                    return true;
            return false;
        }
        for (int i = 0; i < box.dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double v = x[i];
            if (v < box.lo[k] || v > box.hi[k])
                return false;
            if (v == box.lo[k] && !lo_closed[k])
                return false;
            if (v == box.hi[k] && !hi_closed[k])
                return false;
        }
        return true;
    }

    FlaggedInterval window_1d() const {
        return FlaggedInterval{box.lo[0], box.hi[0], lo_closed[0], hi_closed[0]};
    }
};

/// What a case row maps to: a moving point, a moving interval envelope, or a
/// fixed set. Polynomials are per coordinate and act on that coordinate.
struct PieceValue {
    enum class Kind { Point, Interval, Constant };
    Kind kind = Kind::Constant;
    std::array<Quadratic, 2> point_poly{};
    std::array<Quadratic, 2> lo_poly{};
    std::array<Quadratic, 2> hi_poly{};
    ValueSet constant;

    static PieceValue moving_point(Quadratic p0, Quadratic p1 = Quadratic(0.0)) {
        PieceValue v;
        v.kind = Kind::Point;
        v.point_poly = {p0, p1};
        return v;
    }
    static PieceValue moving_interval(Quadratic lo, Quadratic hi) {
        PieceValue v;
        v.kind = Kind::Interval;
        v.lo_poly = {lo, Quadratic(0.0)};
        v.hi_poly = {hi, Quadratic(0.0)};
        return v;
    }
    static PieceValue moving_box(Quadratic lo0, Quadratic hi0, Quadratic lo1, Quadratic hi1) {
        PieceValue v;
        v.kind = Kind::Interval;
        v.lo_poly = {lo0, lo1};
        v.hi_poly = {hi0, hi1};
        return v;
    }
    static PieceValue constant_set(ValueSet s) {
        PieceValue v;
        v.kind = Kind::Constant;
        v.constant = std::move(s);
        return v;
    }

    ValueSet evaluate(const Vector& x, double scale) const {
        switch (kind) {
        case Kind::Point: {
            if (x.dim() == 1)
                return ValueSet::point(Vector(scale * point_poly[0](x.x())));
            return ValueSet::point(
                Vector(scale * point_poly[0](x.x()), scale * point_poly[1](x.y())));
        }
        case Kind::Interval: {
            if (x.dim() == 1) {
                const double lo = scale * lo_poly[0](x.x());
                const double hi = scale * hi_poly[0](x.x());
                if (lo > hi)
                    throw std::logic_error("interval envelope inverted on piece");
                return ValueSet::interval(lo, hi);
            }
            const double lo0 = scale * lo_poly[0](x.x());
            const double hi0 = scale * hi_poly[0](x.x());
            const double lo1 = scale * lo_poly[1](x.y());
            const double hi1 = scale * hi_poly[1](x.y());
            if (lo0 > hi0 || lo1 > hi1)
                throw std::logic_error("interval envelope inverted on piece");
            return ValueSet::box(Box::rect(lo0, hi0, lo1, hi1));
        }
        case Kind::Constant:
            return scale == 1.0 ? constant : constant.scaled(scale);
        }
        throw std::logic_error("unreachable");
    }
};

struct OperatorPiece {
    PiecePredicate pred;
    PieceValue value;
    std::string id;
};

/// An omega-indexed correspondence: prioritized piecewise base plus the
/// optional diagonal combinator T(w, x) = base(x) if x == w, default otherwise.
struct RandomOperator {
    int dim = 1;
    std::vector<OperatorPiece> pieces;
    std::optional<ValueSet> diagonal_default;
    ValueSet domain;
    std::optional<UnitBallFrame> frame;
    std::vector<std::string> notes;

    const OperatorPiece* find_piece(const Vector& x) const {
        for (const OperatorPiece& p : pieces)
            if (p.pred.contains(x))
                return &p;
        return nullptr;
    }

    ValueSet base_value(const Vector& x, double scale = 1.0) const {
        const OperatorPiece* p = find_piece(x);
        if (!p)
            throw std::domain_error("domain gap at x = " + x.str());
        return p->value.evaluate(x, scale);
    }
};

/// Finite Borel partition of the omega interval with distinguished atoms.
struct OmegaPartition {
    double a = 0.0, b = 1.0;
    int cells = 1;
    std::vector<double> atoms;

    OmegaPartition() = default;
    OmegaPartition(double lo, double hi, int n, std::vector<double> at = {})
        : a(lo), b(hi), cells(n), atoms(std::move(at)) {
        if (!(a < b) || cells < 1)
            throw std::invalid_argument("invalid omega partition");
        for (double w : atoms)
            if (w < a || w > b)
                throw std::invalid_argument("atom outside omega interval");
    }

    double cell_lo(int k) const { return a + (b - a) * k / cells; }
    double cell_hi(int k) const { return a + (b - a) * (k + 1) / cells; }
    double representative(int k) const { return a + (b - a) * (k + 0.5) / cells; }

    /// Cell representatives first, atoms after, in declaration order.
    std::vector<double> all_representatives() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(cells) + atoms.size());
        for (int k = 0; k < cells; ++k)
            out.push_back(representative(k));
        for (double w : atoms)
            out.push_back(w);
        return out;
    }
};

/// T(w, .) for one fixed w, optionally scaled by s in [0, 1] (the homotopy
/// deformation). A lightweight view; the operator must outlive it.
class FrozenOperator {
  public:
    FrozenOperator(const RandomOperator& op, double omega, double scale = 1.0)
        : op_(&op), omega_(omega), scale_(scale) {
        if (op.diagonal_default && op.dim != 1)
            throw std::invalid_argument("diagonal combinator requires d=1");
    }

    const RandomOperator& op() const { return *op_; }
    double omega() const { return omega_; }
    double scale() const { return scale_; }
    int dim() const { return op_->dim; }
    bool diagonal() const { return op_->diagonal_default.has_value(); }

    ValueSet evaluate(const Vector& x) const {
        if (!set_contains(op_->domain, x))
            throw std::invalid_argument("point outside operator domain: " + x.str());
        if (diagonal() && x.dim() == 1 && x.x() != omega_) {
            return scale_ == 1.0 ? *op_->diagonal_default
                                 : op_->diagonal_default->scaled(scale_);
        }
        return op_->base_value(x, scale_);
    }

    double residual(const Vector& x) const { return set_distance(x, evaluate(x)); }

    // --- exact 1D envelope machinery -------------------------------------

    /// Envelope bounds of the value hull [lo(z), hi(z)] over a window of the
    /// domain. Sup/inf over half-open windows equal the closure extrema, so
    /// the numbers below are the exact envelope extremes.
    struct EnvBounds {
        double lo_inf = kInf, lo_sup = -kInf;
        double hi_inf = kInf, hi_sup = -kInf;
        bool any = false;
        void absorb(double lo, double hi) {
            lo_inf = std::min(lo_inf, lo);
            lo_sup = std::max(lo_sup, lo);
            hi_inf = std::min(hi_inf, hi);
            hi_sup = std::max(hi_sup, hi);
            any = true;
        }
    };

    EnvBounds env_bounds(FlaggedInterval window) const {
        require_1d();
        EnvBounds out;
        const FlaggedSet dom = domain_window();
        FlaggedSet win = FlaggedSet::single(window).intersect(dom);
        if (win.is_empty())
            return out;
        if (diagonal()) {
            bool off_diagonal = false;
            for (const auto& part : win.parts())
                if (!(part.is_point() && part.lo == omega_))
                    off_diagonal = true;
            if (off_diagonal) {
                const Box bb = bounding_box(scale_ == 1.0 ? *op_->diagonal_default
                                                          : op_->diagonal_default->scaled(scale_));
                out.absorb(bb.lo[0], bb.hi[0]);
            }
            if (win.contains(omega_)) {
                const Box bb = bounding_box(op_->base_value(Vector(omega_), scale_));
                out.absorb(bb.lo[0], bb.hi[0]);
            }
            return out;
        }
        for (const OperatorPiece& piece : op_->pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    if (win.contains(q.x())) {
                        const Box bb = bounding_box(piece.value.evaluate(q, scale_));
                        out.absorb(bb.lo[0], bb.hi[0]);
                    }
                continue;
            }
            const FlaggedSet overlap = win.intersect(piece.pred.window_1d());
            for (const auto& part : overlap.parts())
                absorb_piece_range(out, piece.value, part.lo, part.hi);
        }
        return out;
    }

    /// T(w, A) as an exact closed union (1D: merged intervals incl. points;
    /// 2D: per-piece boxes, constant sets via their boxes).
    ValueSet range_envelope(const ValueSet& A) const {
        if (A.is_empty())
            throw std::domain_error("empty value set");
        if (dim() == 1)
            return range_envelope_1d(A);
        return range_envelope_2d(A);
    }

    /// {x in K : d(x, T(w, x)) <= eps}, exactly, as flagged intervals.
    /// eps = 0 gives the fixed-point set itself.
    FlaggedSet approximate_fixed_set(const FlaggedInterval& K, double eps = 0.0) const {
        require_1d();
        FlaggedSet win = FlaggedSet::single(K).intersect(domain_window());
        FlaggedSet out;
        if (diagonal()) {
            ValueSet d = scale_ == 1.0 ? *op_->diagonal_default
                                       : op_->diagonal_default->scaled(scale_);
            if (eps > 0.0)
                d = set_enlarge(d, eps);
            FlaggedSet from_default = FlaggedSet::from_value_set(d).intersect(win);
            from_default = from_default.remove_point(omega_);
            out = out.unite(from_default);
            if (win.contains(omega_)) {
                const double r = set_distance(Vector(omega_), op_->base_value(Vector(omega_), scale_));
                if (r <= eps)
                    out.add_point(omega_);
            }
            out.coalesce(0.0);
            return out;
        }
        for (const OperatorPiece& piece : op_->pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    if (win.contains(q.x())) {
                        const double r = set_distance(q, piece.value.evaluate(q, scale_));
                        if (r <= eps)
                            out.add_point(q.x());
                    }
                continue;
            }
            const FlaggedSet overlap = win.intersect(piece.pred.window_1d());
            if (overlap.is_empty())
                continue;
            const FlaggedSet sols = piece_residual_set(piece.value, eps);
            out = out.unite(sols.intersect(overlap));
        }
        out.coalesce(1e-12);
        return out;
    }

    /// The set-valued inverse as the worked tables define it: per-piece
    /// solutions of lo(x) <= y <= hi(x), plus the {w} diagonal contribution
    /// when y lies in base(w) or in the default set.
    FlaggedSet preimage(double y) const {
        require_1d();
        const FlaggedSet dom = domain_window();
        FlaggedSet out;
        for (const OperatorPiece& piece : op_->pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    if (dom.contains(q.x()) &&
                        set_contains(piece.value.evaluate(q, scale_), Vector(y)))
                        out.add_point(q.x());
                continue;
            }
            const FlaggedSet overlap = dom.intersect(piece.pred.window_1d());
            if (overlap.is_empty())
                continue;
            const FlaggedSet sols = piece_level_set(piece.value, y);
            out = out.unite(sols.intersect(overlap));
        }
        if (diagonal() && dom.contains(omega_)) {
            const ValueSet at_diag = op_->base_value(Vector(omega_), scale_);
            const ValueSet dflt = scale_ == 1.0 ? *op_->diagonal_default
                                                : op_->diagonal_default->scaled(scale_);
            if (set_contains(at_diag, Vector(y)) || set_contains(dflt, Vector(y)))
                out.add_point(omega_);
        }
        out.coalesce(1e-12);
        return out;
    }

    FlaggedSet domain_window() const {
        require_1d();
        return FlaggedSet::from_value_set(op_->domain);
    }

  private:
    void require_1d() const {
        if (dim() != 1)
            throw std::invalid_argument("operation requires d=1");
    }

    void absorb_piece_range(EnvBounds& out, const PieceValue& v, double a, double b) const {
        switch (v.kind) {
        case PieceValue::Kind::Point: {
            const auto r = v.point_poly[0].scaled(scale_).range(a, b);
            out.absorb(r.first, r.first);
            out.absorb(r.second, r.second);
            return;
        }
        case PieceValue::Kind::Interval: {
            const auto rl = v.lo_poly[0].scaled(scale_).range(a, b);
            const auto rh = v.hi_poly[0].scaled(scale_).range(a, b);
            out.lo_inf = std::min(out.lo_inf, rl.first);
            out.lo_sup = std::max(out.lo_sup, rl.second);
            out.hi_inf = std::min(out.hi_inf, rh.first);
            out.hi_sup = std::max(out.hi_sup, rh.second);
            out.any = true;
            return;
        }
        case PieceValue::Kind::Constant: {
            const ValueSet s = scale_ == 1.0 ? v.constant : v.constant.scaled(scale_);
            const Box bb = bounding_box(s);
            out.absorb(bb.lo[0], bb.hi[0]);
            return;
        }
        }
    }

    /// {x : value(x) contains y} for one piece (unwindowed).
    FlaggedSet piece_level_set(const PieceValue& v, double y) const {
        switch (v.kind) {
        case PieceValue::Kind::Point: {
            const Quadratic q = v.point_poly[0].scaled(scale_).shifted(-y);
            const auto roots = q.roots();
            if (roots.everywhere)
                return FlaggedSet::single({-kInf, kInf, false, false});
            FlaggedSet out;
            for (double r : roots.values)
                out.add_point(r);
            return out;
        }
        case PieceValue::Kind::Interval: {
            // lo(x) <= y and hi(x) >= y
            return quad_nonpositive(v.lo_poly[0].scaled(scale_).shifted(-y))
                .intersect(quad_nonpositive(v.hi_poly[0].scaled(scale_).shifted(-y).negated()));
        }
        case PieceValue::Kind::Constant: {
            const ValueSet s = scale_ == 1.0 ? v.constant : v.constant.scaled(scale_);
            if (set_contains(s, Vector(y)))
                return FlaggedSet::single({-kInf, kInf, false, false});
            return FlaggedSet::empty();
        }
        }
        return FlaggedSet::empty();
    }

    /// {x : d(x, value(x)) <= eps} for one piece (unwindowed).
    FlaggedSet piece_residual_set(const PieceValue& v, double eps) const {
        switch (v.kind) {
        case PieceValue::Kind::Point: {
            const Quadratic p = v.point_poly[0].scaled(scale_);
            // |p(x) - x| <= eps
            return quad_nonpositive(p.minus_identity().shifted(-eps))
                .intersect(quad_nonpositive(p.minus_identity().negated().shifted(-eps)));
        }
        case PieceValue::Kind::Interval: {
            // lo(x) - eps <= x <= hi(x) + eps
            return quad_nonpositive(v.lo_poly[0].scaled(scale_).minus_identity().shifted(-eps))
                .intersect(quad_nonpositive(
                    v.hi_poly[0].scaled(scale_).minus_identity().negated().shifted(-eps)));
        }
        case PieceValue::Kind::Constant: {
            ValueSet s = scale_ == 1.0 ? v.constant : v.constant.scaled(scale_);
            if (eps > 0.0)
                s = set_enlarge(s, eps);
            return FlaggedSet::from_value_set(s);
        }
        }
        return FlaggedSet::empty();
    }

    static FlaggedSet quad_nonpositive(const Quadratic& q) {
        FlaggedSet out;
        for (const auto& [lo, hi] : q.nonpositive_set())
            out.add(FlaggedInterval{lo, hi, std::isfinite(lo), std::isfinite(hi)});
        return out;
    }

    ValueSet range_envelope_1d(const ValueSet& A) const {
        std::vector<Box> boxes;
        const FlaggedSet dom = domain_window();
        FlaggedSet region = FlaggedSet::from_value_set(A).intersect(dom);
        if (region.is_empty())
            throw std::invalid_argument("A does not meet the operator domain");
        if (diagonal()) {
            FlaggedSet off = region.remove_point(omega_);
            if (!off.is_empty()) {
                const ValueSet d = scale_ == 1.0 ? *op_->diagonal_default
                                                 : op_->diagonal_default->scaled(scale_);
                append_boxes(boxes, d);
            }
            if (region.contains(omega_))
                append_boxes(boxes, op_->base_value(Vector(omega_), scale_));
            return ValueSet::interval_union(boxes);
        }
        for (const OperatorPiece& piece : op_->pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    if (region.contains(q.x()))
                        append_boxes(boxes, piece.value.evaluate(q, scale_));
                continue;
            }
            const FlaggedSet overlap = region.intersect(piece.pred.window_1d());
            for (const auto& part : overlap.parts()) {
                EnvBounds eb;
                absorb_piece_range(eb, piece.value, part.lo, part.hi);
                if (piece.value.kind == PieceValue::Kind::Constant) {
                    const ValueSet s =
                        scale_ == 1.0 ? piece.value.constant : piece.value.constant.scaled(scale_);
                    append_boxes(boxes, s);
                } else if (eb.any) {
                    boxes.push_back(Box::interval(eb.lo_inf, eb.hi_sup));
                }
            }
        }
        if (boxes.empty())
            throw std::invalid_argument("A does not meet the operator domain");
        return ValueSet::interval_union(boxes);
    }

    ValueSet range_envelope_2d(const ValueSet& A) const {
        const Box region = bounding_box(A);
        std::vector<Box> boxes;
        for (const OperatorPiece& piece : op_->pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    if (region.contains(q) && set_contains(A, q))
                        append_boxes(boxes, piece.value.evaluate(q, scale_));
                continue;
            }
            const auto overlap = piece.pred.box.intersect(region);
            if (!overlap)
                continue;
            switch (piece.value.kind) {
            case PieceValue::Kind::Point: {
                const auto r0 = piece.value.point_poly[0].scaled(scale_).range(overlap->lo[0],
                                                                               overlap->hi[0]);
                const auto r1 = piece.value.point_poly[1].scaled(scale_).range(overlap->lo[1],
                                                                               overlap->hi[1]);
                boxes.push_back(Box::rect(r0.first, r0.second, r1.first, r1.second));
                break;
            }
            case PieceValue::Kind::Interval: {
                const auto l0 = piece.value.lo_poly[0].scaled(scale_).range(overlap->lo[0],
                                                                            overlap->hi[0]);
                const auto h0 = piece.value.hi_poly[0].scaled(scale_).range(overlap->lo[0],
                                                                            overlap->hi[0]);
                const auto l1 = piece.value.lo_poly[1].scaled(scale_).range(overlap->lo[1],
                                                                            overlap->hi[1]);
                const auto h1 = piece.value.hi_poly[1].scaled(scale_).range(overlap->lo[1],
                                                                            overlap->hi[1]);
                boxes.push_back(Box::rect(l0.first, h0.second, l1.first, h1.second));
                break;
            }
            case PieceValue::Kind::Constant: {
                const ValueSet s =
                    scale_ == 1.0 ? piece.value.constant : piece.value.constant.scaled(scale_);
                append_boxes(boxes, s);
                break;
            }
            }
        }
        if (boxes.empty())
            throw std::invalid_argument("A does not meet the operator domain");
        return ValueSet::interval_union(boxes);
    }

    static void append_boxes(std::vector<Box>& boxes, const ValueSet& s) {
        if (const auto* iv = s.get_if<IntervalUnionData>()) {
            if (s.inflation() == 0.0) {
                for (const Box& b : iv->boxes)
                    boxes.push_back(b);
                return;
            }
        }
        if (const auto* pts = s.get_if<PointSetData>()) {
            if (s.inflation() == 0.0) {
                for (const Vector& p : pts->points) {
                    Box b;
                    b.dim = p.dim();
                    b.lo = {p.x(), p.dim() == 2 ? p.y() : 0.0};
                    b.hi = b.lo;
                    boxes.push_back(b);
                }
                return;
            }
        }
        boxes.push_back(bounding_box(s)); // outer box for round variants
    }

    const RandomOperator* op_;
    double omega_;
    double scale_;
};

// ---------------------------------------------------------------------------
// public entry points

inline ValueSet evaluate(const RandomOperator& T, double omega, const Vector& x) {
    return FrozenOperator(T, omega).evaluate(x);
}

inline double residual(const RandomOperator& T, double omega, const Vector& x) {
    return FrozenOperator(T, omega).residual(x);
}

inline FlaggedSet preimage(const RandomOperator& T, double omega, double y) {
    if (T.dim != 1)
        throw std::invalid_argument("preimage requires d=1");
    return FrozenOperator(T, omega).preimage(y);
}

inline ValueSet range_envelope(const RandomOperator& T, double omega, const ValueSet& A) {
    return FrozenOperator(T, omega).range_envelope(A);
}

/// Smallest n0 <= 10^6 with B(T(w, C), 1/n0) contained in C for every
/// partition representative and atom.
inline int find_n0(const RandomOperator& T, const OmegaPartition& P, const ValueSet& C,
                   int n_cap = 1000000) {
    std::vector<ValueSet> envelopes;
    for (double w : P.all_representatives())
        envelopes.push_back(FrozenOperator(T, w).range_envelope(C));
    auto admissible = [&](int n) {
        const double eps = 1.0 / n;
        for (const ValueSet& env : envelopes)
            if (!set_contained_in(set_enlarge(env, eps), C))
                return false;
        return true;
    };
    if (!admissible(n_cap))
        throw std::domain_error("hypothesis n0 unsatisfiable");
    int lo = 1, hi = n_cap;
    while (lo < hi) { // containment is monotone in n
        const int mid = lo + (hi - lo) / 2;
        if (admissible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Scenario sanity: pieces cover the domain, overlaps agree, diagonal only
/// in 1D. Returns human-readable problems (empty when valid).
inline std::vector<std::string> validate_operator(const RandomOperator& T) {
    std::vector<std::string> issues;
    if (T.dim != 1 && T.dim != 2)
        issues.push_back("dimension must be 1 or 2");
    if (T.diagonal_default && T.dim != 1)
        issues.push_back("diagonal combinator requires d=1");
    if (T.pieces.empty())
        issues.push_back("operator needs at least one piece");
    if (!T.domain.is_empty() && !set_bounded(T.domain))
        issues.push_back("domain must be bounded (truncate unbounded domains)");
    if (T.dim == 1 && !T.pieces.empty()) {
        FlaggedSet covered;
        for (const auto& piece : T.pieces) {
            if (piece.pred.is_points()) {
                for (const Vector& q : piece.pred.points)
                    covered.add_point(q.x());
            } else {
                covered.add(piece.pred.window_1d());
            }
        }
        std::vector<double> probes;
        for (const auto& piece : T.pieces) {
            if (piece.pred.is_points())
                continue;
            for (double edge : {piece.pred.box.lo[0], piece.pred.box.hi[0]})
                if (std::isfinite(edge))
                    probes.push_back(edge);
        }
        const FlaggedSet dom = FlaggedSet::from_value_set(T.domain);
        for (const auto& part : dom.parts()) {
            // uniform sweep plus the exact piece boundaries: point-sized
            // gaps sit at breakpoints
            const int n = 257;
            std::vector<double> xs = probes;
            for (int i = 0; i <= n; ++i)
                xs.push_back(part.lo + (part.hi - part.lo) * i / n);
            bool reported = false;
            for (double x : xs) {
                if (!std::isfinite(x) || reported)
                    continue;
                if (part.contains(x) && !covered.contains(x)) {
                    issues.push_back("domain gap near x = " + std::to_string(x));
                    reported = true;
                }
            }
        }
        // pairwise overlap consistency, checked at overlap endpoints/midpoint
        for (std::size_t i = 0; i < T.pieces.size(); ++i) {
            for (std::size_t j = i + 1; j < T.pieces.size(); ++j) {
                const auto& pi = T.pieces[i];
                const auto& pj = T.pieces[j];
                if (pi.pred.is_points() || pj.pred.is_points())
                    continue;
                const FlaggedSet ov = FlaggedSet::single(pi.pred.window_1d())
                                          .intersect(pj.pred.window_1d());
                for (const auto& part : ov.parts()) {
                    bool flagged = false;
                    for (double x : {part.lo, 0.5 * (part.lo + part.hi), part.hi}) {
                        if (!part.contains(x) || flagged)
                            continue;
                        const ValueSet a = pi.value.evaluate(Vector(x), 1.0);
                        const ValueSet b = pj.value.evaluate(Vector(x), 1.0);
                        const Box ba = bounding_box(a), bb = bounding_box(b);
                        if (std::abs(ba.lo[0] - bb.lo[0]) > 1e-12 ||
                            std::abs(ba.hi[0] - bb.hi[0]) > 1e-12) {
                            issues.push_back("ambiguous overlap between pieces " + pi.id +
                                             " and " + pj.id + " at x = " + std::to_string(x));
                            flagged = true;
                        }
                    }
                }
            }
        }
    }
    return issues;
}

} // namespace svfix
