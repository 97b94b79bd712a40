#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "svfix/value_set.hpp"

namespace svfix {

/// One maximal interval with open/closed endpoints; lo == hi means a point
/// (both ends closed then). Infinite endpoints are always open.
struct FlaggedInterval {
    double lo = 0.0, hi = 0.0;
    bool lo_closed = true, hi_closed = true;

    static FlaggedInterval point(double v) { return {v, v, true, true}; }

    bool valid() const {
        if (lo > hi)
            return false;
        if (lo == hi)
            return lo_closed && hi_closed && std::isfinite(lo);
        if (!std::isfinite(lo) && lo_closed)
            return false;
        if (!std::isfinite(hi) && hi_closed)
            return false;
        return true;
    }
    bool contains(double x) const {
        if (x < lo || x > hi)
            return false;
        if (x == lo && !lo_closed)
            return false;
        if (x == hi && !hi_closed)
            return false;
        return true;
    }
    bool is_point() const { return lo == hi; }
};

/// Exact 1D sets built from solving piecewise-quadratic inequalities:
/// finitely many flagged intervals. Supports the set algebra the preimage
/// and fixed-point machinery needs, including closedness certification.
class FlaggedSet {
  public:
    FlaggedSet() = default;

    static FlaggedSet empty() { return {}; }
    static FlaggedSet single(FlaggedInterval iv) {
        FlaggedSet s;
        if (iv.valid())
            s.parts_.push_back(iv);
        s.normalize();
        return s;
    }
    static FlaggedSet point(double v) { return single(FlaggedInterval::point(v)); }
    static FlaggedSet closed(double lo, double hi) {
        return single(FlaggedInterval{lo, hi, true, true});
    }

    /// A closed 1D ValueSet as a flagged set (interval unions and points).
    static FlaggedSet from_value_set(const ValueSet& S) {
        FlaggedSet out;
        if (S.is_empty())
            return out;
        if (S.dim() != 1)
            throw std::invalid_argument("flagged sets are 1D");
        if (const auto* iv = S.get_if<IntervalUnionData>()) {
            for (const Box& b : iv->boxes)
                out.parts_.push_back({b.lo[0], b.hi[0], true, true});
        } else if (const auto* pts = S.get_if<PointSetData>()) {
            for (const Vector& p : pts->points)
                out.parts_.push_back(FlaggedInterval::point(p.x()));
        } else if (const auto* hs = S.get_if<HalfSpaceData>()) {
            // {x : n x <= b} with unit n = +-1
            if (hs->normal.x() > 0.0)
                out.parts_.push_back({-kInf, hs->offset, false, true});
            else
                out.parts_.push_back({-hs->offset, kInf, true, false});
        } else if (const auto* ray = S.get_if<RayData>()) {
            if (ray->direction.x() > 0.0)
                out.parts_.push_back({ray->origin.x(), kInf, true, false});
            else
                out.parts_.push_back({-kInf, ray->origin.x(), false, true});
        } else {
            throw std::invalid_argument("unsupported 1D value set variant");
        }
        out.normalize();
        return out;
    }

    const std::vector<FlaggedInterval>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }

    bool contains(double x) const {
        for (const auto& p : parts_)
            if (p.contains(x))
                return true;
        return false;
    }

    void add(FlaggedInterval iv) {
        if (iv.valid())
            parts_.push_back(iv);
        normalize();
    }
    void add_point(double v) { add(FlaggedInterval::point(v)); }

    FlaggedSet unite(const FlaggedSet& other) const {
        FlaggedSet out = *this;
        out.parts_.insert(out.parts_.end(), other.parts_.begin(), other.parts_.end());
        out.normalize();
        return out;
    }

    FlaggedSet intersect(const FlaggedInterval& window) const {
        FlaggedSet out;
        for (const auto& p : parts_) {
            FlaggedInterval r;
            if (p.lo > window.lo) {
                r.lo = p.lo;
                r.lo_closed = p.lo_closed;
            } else if (p.lo < window.lo) {
                r.lo = window.lo;
                r.lo_closed = window.lo_closed;
            } else {
                r.lo = p.lo;
                r.lo_closed = p.lo_closed && window.lo_closed;
            }
            if (p.hi < window.hi) {
                r.hi = p.hi;
                r.hi_closed = p.hi_closed;
            } else if (p.hi > window.hi) {
                r.hi = window.hi;
                r.hi_closed = window.hi_closed;
            } else {
                r.hi = p.hi;
                r.hi_closed = p.hi_closed && window.hi_closed;
            }
            if (r.lo < r.hi || (r.lo == r.hi && r.lo_closed && r.hi_closed))
                out.parts_.push_back(r);
        }
        out.normalize();
        return out;
    }

    FlaggedSet intersect(const FlaggedSet& other) const {
        FlaggedSet out;
        for (const auto& w : other.parts_) {
            FlaggedSet piece = intersect(w);
            out.parts_.insert(out.parts_.end(), piece.parts_.begin(), piece.parts_.end());
        }
        out.normalize();
        return out;
    }

    /// Remove one point. An interior hit splits the interval into two
    /// half-open parts.
    FlaggedSet remove_point(double v) const {
        FlaggedSet out;
        for (const auto& p : parts_) {
            if (!p.contains(v)) {
                out.parts_.push_back(p);
                continue;
            }
            if (p.is_point())
                continue;
            if (v == p.lo) {
                out.parts_.push_back({p.lo, p.hi, false, p.hi_closed});
            } else if (v == p.hi) {
                out.parts_.push_back({p.lo, p.hi, p.lo_closed, false});
            } else {
                out.parts_.push_back({p.lo, v, p.lo_closed, false});
                out.parts_.push_back({v, p.hi, false, p.hi_closed});
            }
        }
        out.normalize();
        return out;
    }

    /// Is the union a closed set? Open endpoints are fine only at +-inf.
    bool is_closed() const {
        for (const auto& p : parts_) {
            if (std::isfinite(p.lo) && !p.lo_closed)
                return false;
            if (std::isfinite(p.hi) && !p.hi_closed)
                return false;
        }
        return true;
    }

    /// First open finite endpoint, as closedness refutation evidence.
    std::optional<double> open_endpoint() const {
        for (const auto& p : parts_) {
            if (std::isfinite(p.lo) && !p.lo_closed)
                return p.lo;
            if (std::isfinite(p.hi) && !p.hi_closed)
                return p.hi;
        }
        return std::nullopt;
    }

    /// Smallest attained element, if any part attains its infimum.
    std::optional<double> min_element() const {
        for (const auto& p : parts_) {
            if (p.lo_closed && std::isfinite(p.lo))
                return p.lo;
            // No attained minimum in this part; a deterministic interior
            // fallback keeps downstream tie-breaking total.
            if (std::isfinite(p.lo) && std::isfinite(p.hi) && p.hi > p.lo) {
                const double w = p.hi - p.lo;
                const double cand = p.lo + std::min(1e-9, 0.5 * w);
                if (p.contains(cand))
                    return cand;
            }
            if (p.hi_closed && std::isfinite(p.hi))
                return p.hi;
        }
        return std::nullopt;
    }

    /// Closure as a closed ValueSet (intervals + isolated points).
    ValueSet closure_value_set() const {
        std::vector<Box> boxes;
        for (const auto& p : parts_) {
            if (!std::isfinite(p.lo) || !std::isfinite(p.hi))
                throw std::domain_error("unbounded flagged set has no box form");
            boxes.push_back(Box::interval(p.lo, p.hi));
        }
        if (boxes.empty())
            return ValueSet::empty(1);
        return ValueSet::interval_union(boxes);
    }

    /// Merge endpoints closer than eps (absorbs sqrt round-off from the
    /// quadratic solver into exact piece endpoints).
    void coalesce(double eps) {
        if (parts_.size() < 2)
            return;
        std::vector<FlaggedInterval> merged;
        merged.push_back(parts_.front());
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            FlaggedInterval& last = merged.back();
            const FlaggedInterval& cur = parts_[i];
            bool merge;
            if (cur.lo < last.hi)
                merge = true;
            else if (cur.lo == last.hi)
                merge = last.hi_closed || cur.lo_closed; // open-open touch is a real hole
            else
                merge = eps > 0.0 && cur.lo - last.hi <= eps;
            if (merge) {
                if (cur.hi > last.hi) {
                    last.hi = cur.hi;
                    last.hi_closed = cur.hi_closed;
                } else if (cur.hi == last.hi) {
                    last.hi_closed = last.hi_closed || cur.hi_closed;
                }
            } else {
                merged.push_back(cur);
            }
        }
        parts_ = std::move(merged);
    }

  private:
    void normalize() {
        if (parts_.empty())
            return;
        std::sort(parts_.begin(), parts_.end(), [](const FlaggedInterval& a, const FlaggedInterval& b) {
            if (a.lo != b.lo)
                return a.lo < b.lo;
            if (a.lo_closed != b.lo_closed)
                return a.lo_closed; // closed start first
            return a.hi < b.hi;
        });
        std::vector<FlaggedInterval> merged;
        for (const auto& cur : parts_) {
            if (merged.empty()) {
                merged.push_back(cur);
                continue;
            }
            FlaggedInterval& last = merged.back();
            const bool overlap =
                cur.lo < last.hi ||
                (cur.lo == last.hi && (cur.lo_closed || last.hi_closed));
            if (!overlap) {
                merged.push_back(cur);
                continue;
            }
            if (cur.lo == last.lo)
                last.lo_closed = last.lo_closed || cur.lo_closed;
            if (cur.hi > last.hi) {
                last.hi = cur.hi;
                last.hi_closed = cur.hi_closed;
            } else if (cur.hi == last.hi) {
                last.hi_closed = last.hi_closed || cur.hi_closed;
            }
        }
        parts_ = std::move(merged);
    }

    std::vector<FlaggedInterval> parts_;
};

} // namespace svfix
