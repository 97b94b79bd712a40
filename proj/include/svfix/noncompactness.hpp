#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "svfix/correspondence.hpp"
#include "svfix/value_set.hpp"

namespace svfix {

/// The Kuratowski measure in R^d collapses to two values: 0 for bounded
/// (hence precompact) sets, infinity for unbounded ones. The module says so
/// out loud instead of faking a continuous gauge.
struct Gauge {
    bool infinite = false;
    std::string evidence;

    bool zero() const { return !infinite; }
    friend bool operator==(const Gauge& a, const Gauge& b) { return a.infinite == b.infinite; }
};

inline Gauge kuratowski_gauge(const ValueSet& S) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    Gauge g;
    if (!set_bounded(S)) {
        g.infinite = true;
        g.evidence = "unbounded set, gauge assigned infinity";
    } else {
        g.infinite = false;
        g.evidence = "bounded subset of R^d is precompact, gauge 0 "
                     "(finite-dimensional degeneracy)";
    }
    return g;
}

/// Constructive cover by boxes of diameter <= e. 1D uses intervals of length
/// e; 2D uses squares of side e/sqrt(2) that intersect the set.
inline std::vector<Box> cover_witness(const ValueSet& S, double e) {
    if (S.is_empty())
        throw std::domain_error("empty value set");
    if (!(e > 0.0))
        throw std::invalid_argument("cover diameter must be positive");
    if (!set_bounded(S))
        throw std::domain_error("cover witness of unbounded set");
    const Box bb = bounding_box(S);
    std::vector<Box> cells;
    if (S.dim() == 1) {
        const double width = bb.hi[0] - bb.lo[0];
        const int n = std::max(1, static_cast<int>(std::ceil(width / e - 1e-12)));
        for (int i = 0; i < n; ++i)
            cells.push_back(Box::interval(bb.lo[0] + i * e, std::min(bb.lo[0] + (i + 1) * e, bb.hi[0])));
        return cells;
    }
    const double side = e / std::sqrt(2.0);
    const int nx = std::max(1, static_cast<int>(std::ceil((bb.hi[0] - bb.lo[0]) / side - 1e-12)));
    const int ny = std::max(1, static_cast<int>(std::ceil((bb.hi[1] - bb.lo[1]) / side - 1e-12)));
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            Box cell = Box::rect(bb.lo[0] + i * side, std::min(bb.lo[0] + (i + 1) * side, bb.hi[0]),
                                 bb.lo[1] + j * side, std::min(bb.lo[1] + (j + 1) * side, bb.hi[1]));
            // keep only cells that actually meet S: center and corners probe,
            // then the exact distance from the nearest probe
            bool meets = false;
            const Vector center(0.5 * (cell.lo[0] + cell.hi[0]), 0.5 * (cell.lo[1] + cell.hi[1]));
            const double half_diag = 0.5 * cell.diameter();
            if (set_distance(center, S) <= half_diag + 1e-12)
                meets = true;
            if (meets)
                cells.push_back(cell);
        }
    }
    return cells;
}

struct ContractionClass {
    enum class Kind { Condensing, KSetContractive, Unclassified };
    Kind kind = Kind::Unclassified;
    double k = 0.0; // for KSetContractive
    std::string evidence;
    std::optional<ValueSet> range_witness;

    bool condensing() const { return kind == Kind::Condensing; }
};

/// Classifies T(w, .) on the given domain. Rules, in order: a strict scaling
/// factor shrinks the gauge of every set; a family of moving points is an
/// affine-style map with per-piece slope bound k; a bounded range means the
/// image of everything sits in one compact set. On a bounded domain in R^d
/// the condensing condition is vacuous and the evidence says so.
inline ContractionClass classify_map(const FrozenOperator& T, const ValueSet& domain) {
    ContractionClass out;
    if (T.scale() < 1.0 && T.scale() >= 0.0) {
        out.kind = ContractionClass::Kind::Condensing;
        out.evidence = "scaled by s = " + std::to_string(T.scale()) +
                       " < 1: gauge(T(A)) = s * gauge(A) < gauge(A) whenever gauge(A) > 0";
        return out;
    }
    bool all_points = !T.diagonal();
    double slope = 0.0;
    if (all_points) {
        const Box dom_bb = set_bounded(domain) ? bounding_box(domain) : Box{};
        for (const OperatorPiece& piece : T.op().pieces) {
            if (piece.value.kind != PieceValue::Kind::Point) {
                all_points = false;
                break;
            }
            try {
                for (int i = 0; i < T.dim(); ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    double a = piece.pred.is_points() ? piece.pred.points.front()[i]
                                                      : piece.pred.box.lo[k];
                    double b = piece.pred.is_points() ? piece.pred.points.front()[i]
                                                      : piece.pred.box.hi[k];
                    if (set_bounded(domain)) {
                        a = std::max(a, dom_bb.lo[k]);
                        b = std::min(b, dom_bb.hi[k]);
                    }
                    if (a > b)
                        continue;
                    slope = std::max(slope, piece.value.point_poly[k].derivative_bound(a, b));
                }
            } catch (const std::exception& ex) {
                throw std::runtime_error("evaluation failure on piece " + piece.id + ": " +
                                         ex.what());
            }
        }
    }
    if (all_points) {
        if (slope < 1.0) {
            out.kind = ContractionClass::Kind::Condensing;
            out.evidence = "point-valued pieces with slope bound " + std::to_string(slope) +
                           " < 1: a strict set contraction";
        } else {
            out.kind = ContractionClass::Kind::KSetContractive;
            out.k = slope;
            out.evidence = "point-valued pieces with slope bound k = " + std::to_string(slope) +
                           ": gauge(T(A)) <= k * gauge(A)";
        }
        return out;
    }
    try {
        const ValueSet env = T.range_envelope(domain);
        if (set_bounded(env)) {
            out.kind = ContractionClass::Kind::Condensing;
            out.range_witness = env;
            out.evidence = "range envelope bounded: image of every subset lies in one "
                           "compact set, so gauge(T(A)) = 0";
            if (set_bounded(domain))
                out.evidence += "; domain bounded, so no subset has positive gauge "
                                "(condensing holds vacuously in R^d)";
            return out;
        }
    } catch (const std::exception& ex) {
        throw std::runtime_error(std::string("evaluation failure: ") + ex.what());
    }
    out.kind = ContractionClass::Kind::Unclassified;
    out.evidence = "no classification rule applied";
    return out;
}

inline ContractionClass classify_map(const RandomOperator& T, double omega,
                                     const ValueSet& domain) {
    return classify_map(FrozenOperator(T, omega), domain);
}

} // namespace svfix
