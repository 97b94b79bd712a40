#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "svfix/vector.hpp"

namespace svfix {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed axis-aligned box; the 1D case is a closed interval.
struct Box {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};

    static Box interval(double a, double b) {
        Box box;
        box.dim = 1;
        box.lo[0] = a;
        box.hi[0] = b;
        return box;
    }
    static Box rect(double ax, double bx, double ay, double by) {
        Box box;
        box.dim = 2;
        box.lo = {ax, ay};
        box.hi = {bx, by};
        return box;
    }

    bool valid() const {
        for (int i = 0; i < dim; ++i)
            if (!(lo[static_cast<std::size_t>(i)] <= hi[static_cast<std::size_t>(i)]))
                return false;
        return true;
    }
    bool contains(const Vector& p, double tol = 0.0) const {
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (p[i] < lo[k] - tol || p[i] > hi[k] + tol)
                return false;
        }
        return true;
    }
    double distance(const Vector& p) const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double d = std::max({lo[k] - p[i], p[i] - hi[k], 0.0});
            s += d * d;
        }
        return std::sqrt(s);
    }
    bool is_bounded() const {
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
                return false;
        }
        return true;
    }
    double diameter() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double w = hi[k] - lo[k];
            s += w * w;
        }
        return std::sqrt(s);
    }
    Box expanded(double e) const {
        Box box = *this;
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            box.lo[k] -= e;
            box.hi[k] += e;
        }
        return box;
    }
    std::optional<Box> intersect(const Box& other) const {
        Box box = *this;
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            box.lo[k] = std::max(lo[k], other.lo[k]);
            box.hi[k] = std::min(hi[k], other.hi[k]);
            if (box.lo[k] > box.hi[k])
                return std::nullopt;
        }
        return box;
    }
    bool contains_box(const Box& other, double tol = 0.0) const {
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (other.lo[k] < lo[k] - tol || other.hi[k] > hi[k] + tol)
                return false;
        }
        return true;
    }
    std::vector<Vector> corners() const {
        if (dim == 1)
            return {Vector(lo[0]), Vector(hi[0])};
        return {Vector(lo[0], lo[1]), Vector(hi[0], lo[1]), Vector(hi[0], hi[1]),
                Vector(lo[0], hi[1])};
    }
};

struct PointSetData {
    std::vector<Vector> points;
};
struct IntervalUnionData {
    std::vector<Box> boxes;
};
struct BallData {
    Vector center;
    double radius = 0.0;
};
struct PolytopeData {
    std::vector<Vector> vertices; // ccw after normalization, d = 2
};
struct HalfSpaceData {
    Vector normal; // unit after normalization
    double offset = 0.0; // set is {x : <normal, x> <= offset}
};
struct RayData {
    Vector origin;
    Vector direction; // unit after normalization
};

/// A closed subset of R^d in exact form. The optional inflation radius is a
/// Minkowski sum with the closed Euclidean ball: normalization folds it into
/// the variant whenever that is representable (always in 1D), and keeps it
/// symbolic otherwise so distances and memberships stay exact.
class ValueSet {
  public:
    using Variant =
        std::variant<PointSetData, IntervalUnionData, BallData, PolytopeData, HalfSpaceData,
                     RayData>;

    ValueSet() : dim_(1), v_(IntervalUnionData{}) {}

    static ValueSet empty(int dim) {
        ValueSet s;
        s.dim_ = dim;
        s.v_ = IntervalUnionData{};
        return s;
    }
    static ValueSet point(const Vector& p) {
        ValueSet s;
        s.dim_ = p.dim();
        s.v_ = PointSetData{{p}};
        return s;
    }
    static ValueSet points(std::vector<Vector> pts) {
        if (pts.empty())
            throw std::invalid_argument("point set needs at least one point");
        ValueSet s;
        s.dim_ = pts.front().dim();
        s.v_ = PointSetData{std::move(pts)};
        s.normalize();
        return s;
    }
    static ValueSet interval(double a, double b) {
        if (a > b)
            throw std::invalid_argument("interval bounds out of order");
        ValueSet s;
        s.dim_ = 1;
        s.v_ = IntervalUnionData{{Box::interval(a, b)}};
        return s;
    }
    static ValueSet interval_union(std::vector<Box> boxes) {
        ValueSet s;
        s.dim_ = boxes.empty() ? 1 : boxes.front().dim;
        for (const Box& b : boxes)
            if (!b.valid())
                throw std::invalid_argument("invalid box in interval union");
        s.v_ = IntervalUnionData{std::move(boxes)};
        s.normalize();
        return s;
    }
    static ValueSet box(const Box& b) { return interval_union({b}); }
    static ValueSet ball(const Vector& c, double r) {
        if (r < 0.0)
            throw std::invalid_argument("ball radius must be nonnegative");
        ValueSet s;
        s.dim_ = c.dim();
        s.v_ = BallData{c, r};
        s.normalize();
        return s;
    }
    static ValueSet polytope(std::vector<Vector> verts) {
        if (verts.empty())
            throw std::invalid_argument("polytope needs vertices");
        if (verts.front().dim() != 2)
            throw std::invalid_argument("polytope requires d=2");
        ValueSet s;
        s.dim_ = 2;
        s.v_ = PolytopeData{std::move(verts)};
        s.normalize();
        return s;
    }
    static ValueSet half_space(const Vector& normal, double offset) {
        const double n = normal.norm();
        if (n == 0.0)
            throw std::invalid_argument("half-space normal must be nonzero");
        ValueSet s;
        s.dim_ = normal.dim();
        s.v_ = HalfSpaceData{(1.0 / n) * normal, offset / n};
        return s;
    }
    static ValueSet ray(const Vector& origin, const Vector& dir) {
        const double n = dir.norm();
        if (n == 0.0)
            throw std::invalid_argument("ray direction must be nonzero");
        ValueSet s;
        s.dim_ = origin.dim();
        s.v_ = RayData{origin, (1.0 / n) * dir};
        return s;
    }

    int dim() const { return dim_; }
    const Variant& core() const { return v_; }
    double inflation() const { return inflate_; }

    bool is_empty() const {
        if (const auto* pts = std::get_if<PointSetData>(&v_))
            return pts->points.empty();
        if (const auto* iv = std::get_if<IntervalUnionData>(&v_))
            return iv->boxes.empty();
        return false;
    }

    template <class T> const T* get_if() const { return std::get_if<T>(&v_); }
    template <class T> bool holds() const { return std::holds_alternative<T>(v_); }

    std::string variant_name() const {
        struct Namer {
            std::string operator()(const PointSetData&) const { return "points"; }
            std::string operator()(const IntervalUnionData&) const { return "intervals"; }
            std::string operator()(const BallData&) const { return "ball"; }
            std::string operator()(const PolytopeData&) const { return "polytope"; }
            std::string operator()(const HalfSpaceData&) const { return "half_space"; }
            std::string operator()(const RayData&) const { return "ray"; }
        };
        return std::visit(Namer{}, v_);
    }

    /// Distance from the core variant (inflation excluded).
    double core_distance(const Vector& y) const;
    bool core_bounded() const;
    Box core_bounding_box() const; // requires bounded
    double core_diameter() const;
    double core_support(const Vector& dir) const;

    ValueSet inflated(double e) const {
        ValueSet s = *this;
        s.inflate_ += e;
        s.normalize();
        return s;
    }

    ValueSet scaled(double s) const;

    void normalize();

  private:
    int dim_ = 1;
    Variant v_;
    double inflate_ = 0.0;
};

// ---------------------------------------------------------------------------
// distance helpers

namespace detail {

inline double segment_distance(const Vector& p, const Vector& a, const Vector& b) {
    const Vector ab = b - a;
    const double l2 = ab.norm2();
    if (l2 == 0.0)
        return distance(p, a);
    double t = dot(p - a, ab) / l2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

inline double cross2(const Vector& o, const Vector& a, const Vector& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

inline bool polygon_contains(const std::vector<Vector>& ccw, const Vector& p) {
    const std::size_t n = ccw.size();
    if (n == 1)
        return ccw[0] == p;
    if (n == 2)
        return segment_distance(p, ccw[0], ccw[1]) == 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cross2(ccw[i], ccw[(i + 1) % n], p) < 0.0)
            return false;
    }
    return true;
}

inline std::vector<Vector> convex_hull_2d(std::vector<Vector> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2)
        return pts;
    std::vector<Vector> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) { // upper
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

inline double ValueSet::core_distance(const Vector& y) const {
    if (y.dim() != dim_)
        throw std::invalid_argument("dimension mismatch");
    struct Dist {
        const Vector& y;
        double operator()(const PointSetData& s) const {
            double best = kInf;
            for (const Vector& p : s.points)
                best = std::min(best, distance(y, p));
            return best;
        }
        double operator()(const IntervalUnionData& s) const {
            double best = kInf;
            for (const Box& b : s.boxes)
                best = std::min(best, b.distance(y));
            return best;
        }
        double operator()(const BallData& s) const {
            return std::max(0.0, distance(y, s.center) - s.radius);
        }
        double operator()(const PolytopeData& s) const {
            if (s.vertices.size() >= 3 && detail::polygon_contains(s.vertices, y))
                return 0.0;
            double best = kInf;
            const std::size_t n = s.vertices.size();
            if (n == 1)
                return distance(y, s.vertices[0]);
            for (std::size_t i = 0; i < n; ++i)
                best = std::min(best,
                                detail::segment_distance(y, s.vertices[i], s.vertices[(i + 1) % n]));
            return best;
        }
        double operator()(const HalfSpaceData& s) const {
            return std::max(0.0, dot(s.normal, y) - s.offset);
        }
        double operator()(const RayData& s) const {
            const double t = std::max(0.0, dot(y - s.origin, s.direction));
            return distance(y, s.origin + t * s.direction);
        }
    };
    return std::visit(Dist{y}, v_);
}

inline bool ValueSet::core_bounded() const {
    if (holds<HalfSpaceData>() || holds<RayData>())
        return false;
    return true;
}

inline Box ValueSet::core_bounding_box() const {
    struct Bb {
        int dim;
        Box operator()(const PointSetData& s) const {
            Box b;
            b.dim = dim;
            for (int i = 0; i < dim; ++i) {
                const auto k = static_cast<std::size_t>(i);
                b.lo[k] = kInf;
                b.hi[k] = -kInf;
            }
            for (const Vector& p : s.points)
                for (int i = 0; i < dim; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    b.lo[k] = std::min(b.lo[k], p[i]);
                    b.hi[k] = std::max(b.hi[k], p[i]);
                }
            return b;
        }
        Box operator()(const IntervalUnionData& s) const {
            Box b;
            b.dim = dim;
            for (int i = 0; i < dim; ++i) {
                const auto k = static_cast<std::size_t>(i);
                b.lo[k] = kInf;
                b.hi[k] = -kInf;
            }
            for (const Box& x : s.boxes)
                for (int i = 0; i < dim; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    b.lo[k] = std::min(b.lo[k], x.lo[k]);
                    b.hi[k] = std::max(b.hi[k], x.hi[k]);
                }
            return b;
        }
        Box operator()(const BallData& s) const {
            Box b;
            b.dim = dim;
            for (int i = 0; i < dim; ++i) {
                const auto k = static_cast<std::size_t>(i);
                b.lo[k] = s.center[i] - s.radius;
                b.hi[k] = s.center[i] + s.radius;
            }
            return b;
        }
        Box operator()(const PolytopeData& s) const {
            return Bb{dim}(PointSetData{s.vertices});
        }
        Box operator()(const HalfSpaceData&) const {
            throw std::domain_error("bounding box of unbounded set");
        }
        Box operator()(const RayData&) const {
            throw std::domain_error("bounding box of unbounded set");
        }
    };
    return std::visit(Bb{dim_}, v_);
}

inline double ValueSet::core_diameter() const {
    if (!core_bounded())
        return kInf;
    auto pairwise = [](const std::vector<Vector>& pts) {
        double best = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                best = std::max(best, distance(pts[i], pts[j]));
        return best;
    };
    if (const auto* s = get_if<PointSetData>())
        return pairwise(s->points);
    if (const auto* s = get_if<BallData>())
        return 2.0 * s->radius;
    if (const auto* s = get_if<PolytopeData>())
        return pairwise(s->vertices);
    if (const auto* s = get_if<IntervalUnionData>()) {
        std::vector<Vector> pts;
        for (const Box& b : s->boxes)
            for (const Vector& c : b.corners())
                pts.push_back(c);
        return pairwise(pts);
    }
    return kInf;
}

inline double ValueSet::core_support(const Vector& dir) const {
    struct Sup {
        const Vector& u;
        double operator()(const PointSetData& s) const {
            double best = -kInf;
            for (const Vector& p : s.points)
                best = std::max(best, dot(u, p));
            return best;
        }
        double operator()(const IntervalUnionData& s) const {
            double best = -kInf;
            for (const Box& b : s.boxes) {
                double v = 0.0;
                for (int i = 0; i < b.dim; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    v += std::max(u[i] * b.lo[k], u[i] * b.hi[k]);
                }
                best = std::max(best, v);
            }
            return best;
        }
        double operator()(const BallData& s) const { return dot(u, s.center) + s.radius * u.norm(); }
        double operator()(const PolytopeData& s) const {
            return Sup{u}(PointSetData{s.vertices});
        }
        double operator()(const HalfSpaceData& s) const {
            const double un = u.norm();
            if (un == 0.0)
                return 0.0;
            const Vector uhat = (1.0 / un) * u;
            const Vector diff = uhat - s.normal;
            if (diff.norm() <= 1e-14)
                return s.offset * un;
            return kInf;
        }
        double operator()(const RayData& s) const {
            const double along = dot(u, s.direction);
            if (along > 0.0)
                return kInf;
            return dot(u, s.origin);
        }
    };
    return std::visit(Sup{dir}, v_);
}

inline ValueSet ValueSet::scaled(double s) const {
    if (s < 0.0)
        throw std::invalid_argument("negative scaling of a value set");
    ValueSet out = *this;
    out.inflate_ = inflate_ * s;
    struct Scale {
        double s;
        void operator()(PointSetData& d) const {
            for (Vector& p : d.points)
                p = s * p;
        }
        void operator()(IntervalUnionData& d) const {
            for (Box& b : d.boxes)
                for (int i = 0; i < b.dim; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    b.lo[k] *= s;
                    b.hi[k] *= s;
                }
        }
        void operator()(BallData& d) const {
            d.center = s * d.center;
            d.radius *= s;
        }
        void operator()(PolytopeData& d) const {
            for (Vector& p : d.vertices)
                p = s * p;
        }
        void operator()(HalfSpaceData& d) const { d.offset *= s; }
        void operator()(RayData& d) const { d.origin = s * d.origin; }
    };
    std::visit(Scale{s}, out.v_);
    out.normalize();
    return out;
}

inline void ValueSet::normalize() {
    // Fold the inflation into the variant wherever the result is exactly
    // representable; merge 1D intervals into disjoint form.
    if (auto* ball = std::get_if<BallData>(&v_)) {
        ball->radius += inflate_;
        inflate_ = 0.0;
        if (dim_ == 1) {
            const double c = ball->center.x(), r = ball->radius;
            v_ = IntervalUnionData{{Box::interval(c - r, c + r)}};
        }
        return;
    }
    if (auto* hs = std::get_if<HalfSpaceData>(&v_)) {
        hs->offset += inflate_; // normal is unit
        inflate_ = 0.0;
        return;
    }
    if (auto* pts = std::get_if<PointSetData>(&v_)) {
        std::sort(pts->points.begin(), pts->points.end(), [](const Vector& a, const Vector& b) {
            return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
        });
        pts->points.erase(std::unique(pts->points.begin(), pts->points.end()), pts->points.end());
        if (inflate_ > 0.0) {
            if (dim_ == 1) {
                std::vector<Box> boxes;
                for (const Vector& p : pts->points)
                    boxes.push_back(Box::interval(p.x() - inflate_, p.x() + inflate_));
                v_ = IntervalUnionData{std::move(boxes)};
                inflate_ = 0.0;
                // fall through to interval merging below
            } else if (pts->points.size() == 1) {
                v_ = BallData{pts->points.front(), inflate_};
                inflate_ = 0.0;
                return;
            } else {
                return; // union of balls, kept symbolic
            }
        } else {
            return;
        }
    }
    if (auto* iv = std::get_if<IntervalUnionData>(&v_)) {
        if (dim_ == 1) {
            if (inflate_ > 0.0) {
                for (Box& b : iv->boxes) {
                    b.lo[0] -= inflate_;
                    b.hi[0] += inflate_;
                }
                inflate_ = 0.0;
            }
            std::sort(iv->boxes.begin(), iv->boxes.end(),
                      [](const Box& a, const Box& b) { return a.lo[0] < b.lo[0]; });
            std::vector<Box> merged;
            for (const Box& b : iv->boxes) {
                if (!merged.empty() && b.lo[0] <= merged.back().hi[0]) {
                    merged.back().hi[0] = std::max(merged.back().hi[0], b.hi[0]);
                } else {
                    merged.push_back(b);
                }
            }
            iv->boxes = std::move(merged);
        } else {
            // 2D: deterministic order; drop duplicates and covered boxes.
            std::sort(iv->boxes.begin(), iv->boxes.end(), [](const Box& a, const Box& b) {
                return std::tie(a.lo[0], a.lo[1], a.hi[0], a.hi[1]) <
                       std::tie(b.lo[0], b.lo[1], b.hi[0], b.hi[1]);
            });
            std::vector<Box> kept;
            for (std::size_t i = 0; i < iv->boxes.size(); ++i) {
                const Box& b = iv->boxes[i];
                bool drop = false;
                for (std::size_t j = 0; j < iv->boxes.size() && !drop; ++j) {
                    if (i == j)
                        continue;
                    const Box& other = iv->boxes[j];
                    const bool same = other.lo == b.lo && other.hi == b.hi;
                    if (same)
                        drop = j < i;
                    else if (other.contains_box(b))
                        drop = true;
                }
                if (!drop)
                    kept.push_back(b);
            }
            iv->boxes = std::move(kept);
        }
        return;
    }
    if (auto* poly = std::get_if<PolytopeData>(&v_)) {
        auto hull = detail::convex_hull_2d(poly->vertices);
        if (hull.size() == 1 && inflate_ > 0.0) {
            v_ = BallData{hull.front(), inflate_};
            inflate_ = 0.0;
            return;
        }
        if (hull.size() == 1) {
            v_ = PointSetData{{hull.front()}};
            return;
        }
        poly->vertices = std::move(hull);
        return;
    }
    if (auto* ray = std::get_if<RayData>(&v_)) {
        if (dim_ == 1 && inflate_ > 0.0) {
            ray->origin = ray->origin - inflate_ * ray->direction;
            inflate_ = 0.0;
        }
        return;
    }
}

// ---------------------------------------------------------------------------
// public geometry operations

/// d(y, S) = inf over S of the Euclidean distance; exact for every variant.
inline double set_distance(const Vector& y, const ValueSet& S) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    return std::max(0.0, S.core_distance(y) - S.inflation());
}

inline bool set_contains(const ValueSet& S, const Vector& y, double tol = 0.0) {
    if (S.is_empty())
        return false;
    return set_distance(y, S) <= tol;
}

/// Closed eps-enlargement of S (closure of the open one).
inline ValueSet set_enlarge(const ValueSet& S, double eps) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    if (!(eps > 0.0))
        throw std::invalid_argument("enlargement radius must be positive");
    return S.inflated(eps);
}

inline bool set_bounded(const ValueSet& S) { return S.core_bounded(); }

inline Box bounding_box(const ValueSet& S) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    if (!S.core_bounded())
        throw std::domain_error("bounding box of unbounded set");
    return S.core_bounding_box().expanded(S.inflation());
}

inline double set_diameter(const ValueSet& S) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    return S.core_diameter() + 2.0 * S.inflation();
}

/// sup over S of <dir, s>; +inf when unbounded in that direction.
inline double set_support(const ValueSet& S, const Vector& dir) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    const double core = S.core_support(dir);
    if (!std::isfinite(core))
        return core;
    return core + S.inflation() * dir.norm();
}

/// Closed convex hull: smallest interval in 1D, polytope (or ball) in 2D.
inline ValueSet set_hull(const ValueSet& S) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    if (!S.core_bounded())
        throw std::domain_error("hull of unbounded set");
    if (S.dim() == 1) {
        const Box bb = bounding_box(S);
        return ValueSet::interval(bb.lo[0], bb.hi[0]);
    }
    if (S.holds<BallData>())
        return S;
    std::vector<Vector> pts;
    if (const auto* p = S.get_if<PointSetData>())
        pts = p->points;
    else if (const auto* p = S.get_if<PolytopeData>())
        pts = p->vertices;
    else if (const auto* p = S.get_if<IntervalUnionData>()) {
        for (const Box& b : p->boxes)
            for (const Vector& c : b.corners())
                pts.push_back(c);
    }
    ValueSet hull = pts.size() == 1 ? ValueSet::point(pts.front()) : ValueSet::polytope(pts);
    if (S.inflation() > 0.0)
        hull = hull.inflated(S.inflation());
    return hull;
}

/// Is S contained in C (within tol)? C must be an interval union, box, ball
/// or half-space; S may be anything bounded plus half-spaces/rays vs
/// half-space containers.
inline bool set_contained_in(const ValueSet& S, const ValueSet& C, double tol = 0.0) {
    if (S.is_empty())
        return true;
    if (const auto* hs = C.get_if<HalfSpaceData>()) {
        const double sup = set_support(S, hs->normal);
        return sup <= hs->offset + C.inflation() + tol;
    }
    if (const auto* ball = C.get_if<BallData>()) {
        const double radius = ball->radius + C.inflation() + tol;
        if (!set_bounded(S))
            return false;
        if (const auto* bs = S.get_if<BallData>())
            return distance(bs->center, ball->center) + bs->radius + S.inflation() <= radius;
        std::vector<Vector> extremes;
        if (const auto* p = S.get_if<PointSetData>())
            extremes = p->points;
        else if (const auto* p = S.get_if<PolytopeData>())
            extremes = p->vertices;
        else
            extremes = bounding_box(S).corners(); // exact for boxes
        double worst = 0.0;
        for (const Vector& c : extremes)
            worst = std::max(worst, distance(c, ball->center));
        return worst + S.inflation() <= radius;
    }
    if (const auto* iv = C.get_if<IntervalUnionData>()) {
        if (!set_bounded(S))
            return false;
        if (S.dim() == 1) {
            // Every maximal interval of S must fit inside one cell of C.
            auto fits = [&](double lo, double hi) {
                for (const Box& cell : iv->boxes)
                    if (lo >= cell.lo[0] - tol && hi <= cell.hi[0] + tol)
                        return true;
                return false;
            };
            if (const auto* sb = S.get_if<IntervalUnionData>()) {
                for (const Box& b : sb->boxes)
                    if (!fits(b.lo[0] - S.inflation(), b.hi[0] + S.inflation()))
                        return false;
                return true;
            }
            const Box bb = bounding_box(S);
            return fits(bb.lo[0], bb.hi[0]);
        }
        // 2D: containment against the union's single covering box per part.
        const Box bb = bounding_box(S);
        for (const Box& cell : iv->boxes)
            if (cell.expanded(C.inflation() + tol).contains_box(bb))
                return true;
        return false;
    }
    throw std::invalid_argument("unsupported container variant for containment test");
}

/// Deterministic sample of a bounded set: extreme points first, then an
/// interior sweep. Used by boundary-condition checks and test oracles.
inline std::vector<Vector> sample_value_set(const ValueSet& S, int interior = 64) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    if (!set_bounded(S))
        throw std::domain_error("sampling of unbounded set");
    std::vector<Vector> out;
    if (S.dim() == 1) {
        ValueSet norm = S;
        norm.normalize();
        const auto* iv = norm.get_if<IntervalUnionData>();
        std::vector<Box> boxes;
        if (iv)
            boxes = iv->boxes;
        else {
            const Box bb = bounding_box(norm);
            if (const auto* pts = norm.get_if<PointSetData>()) {
                for (const Vector& p : pts->points)
                    out.push_back(p);
                return out;
            }
            boxes = {bb};
        }
        for (const Box& b : boxes) {
            out.emplace_back(b.lo[0]);
            if (b.hi[0] > b.lo[0])
                out.emplace_back(b.hi[0]);
        }
        for (const Box& b : boxes) {
            for (int i = 1; i <= interior; ++i) {
                const double t = static_cast<double>(i) / (interior + 1);
                out.emplace_back(b.lo[0] + t * (b.hi[0] - b.lo[0]));
            }
        }
        return out;
    }
    if (const auto* pts = S.get_if<PointSetData>()) {
        out = pts->points;
        return out;
    }
    if (const auto* ball = S.get_if<BallData>()) {
        constexpr double two_pi = 6.283185307179586476925287;
        const double r = ball->radius + S.inflation();
        out.push_back(ball->center);
        const int ring = std::max(8, interior / 2);
        for (int i = 0; i < ring; ++i) {
            const double a = two_pi * i / ring;
            out.push_back(ball->center + Vector(r * std::cos(a), r * std::sin(a)));
            out.push_back(ball->center + Vector(0.5 * r * std::cos(a), 0.5 * r * std::sin(a)));
        }
        return out;
    }
    std::vector<Vector> extremes;
    if (const auto* poly = S.get_if<PolytopeData>())
        extremes = poly->vertices;
    else if (const auto* iv = S.get_if<IntervalUnionData>())
        for (const Box& b : iv->boxes)
            for (const Vector& c : b.corners())
                extremes.push_back(c);
    out = extremes;
    // interior: convex mixes toward the centroid
    Vector centroid = Vector::zero(2);
    for (const Vector& p : extremes)
        centroid = centroid + (1.0 / extremes.size()) * p;
    out.push_back(centroid);
    for (std::size_t i = 0; i < extremes.size() && out.size() < static_cast<std::size_t>(interior); ++i)
        out.push_back(0.5 * (extremes[i] + centroid));
    return out;
}

} // namespace svfix
