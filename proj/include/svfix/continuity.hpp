#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "svfix/correspondence.hpp"

namespace svfix {

enum class ContinuityMode { lsc, alsc };

struct ContinuityWitness {
    double x = 0.0;
    double eps = 0.0;
    std::optional<double> sample; // refuting v for l.s.c.
    std::string detail;
};

struct ContinuityCertificate {
    ContinuityMode mode = ContinuityMode::alsc;
    enum class Verdict { certified, refuted, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    double eps = 0.0;
    int grid = 0;
    std::optional<ContinuityWitness> witness;
    std::string detail;

    bool certified() const { return verdict == Verdict::certified; }
    bool refuted() const { return verdict == Verdict::refuted; }
    std::string verdict_name() const {
        switch (verdict) {
        case Verdict::certified:
            return "certified";
        case Verdict::refuted:
            return "refuted";
        default:
            return "inconclusive";
        }
    }
};

namespace detail {

/// Shrinking symmetric radii around every candidate point.
inline std::vector<double> shrink_radii() {
    std::vector<double> r;
    for (int k = 1; k <= 20; ++k)
        r.push_back(std::ldexp(1.0, -k));
    return r;
}

/// Envelope hull limits from one side of x (exact: the adjacent piece is
/// constant for probes past the last breakpoint, and its polynomials extend
/// continuously to x itself).
struct SideLimits {
    bool exists = false;
    double lo = 0.0, hi = 0.0;
};

inline std::vector<double> breakpoints_1d(const FrozenOperator& T) {
    std::vector<double> bps;
    for (const OperatorPiece& p : T.op().pieces) {
        if (p.pred.is_points()) {
            for (const Vector& q : p.pred.points)
                bps.push_back(q.x());
        } else {
            if (std::isfinite(p.pred.box.lo[0]))
                bps.push_back(p.pred.box.lo[0]);
            if (std::isfinite(p.pred.box.hi[0]))
                bps.push_back(p.pred.box.hi[0]);
        }
    }
    if (T.diagonal())
        bps.push_back(T.omega());
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    return bps;
}

inline SideLimits side_limits(const FrozenOperator& T, double x, bool right,
                              const std::vector<double>& bps) {
    // distance to the nearest breakpoint strictly on that side
    double gap = kInf;
    for (double b : bps) {
        const double d = right ? b - x : x - b;
        if (d > 0.0)
            gap = std::min(gap, d);
    }
    double probe_off = std::min(std::ldexp(1.0, -30), (std::isfinite(gap) ? gap : 1.0) * 0.5);
    SideLimits out;
    const double probe = right ? x + probe_off : x - probe_off;
    const FlaggedInterval window =
        right ? FlaggedInterval{x, probe, false, true} : FlaggedInterval{probe, x, true, false};
    // identify the effective piece at the probe, then take its polynomial
    // limits at x itself
    if (T.diagonal()) {
        const FlaggedSet dom = T.domain_window();
        if (!dom.contains(probe))
            return out;
        const ValueSet d = T.scale() == 1.0 ? *T.op().diagonal_default
                                            : T.op().diagonal_default->scaled(T.scale());
        const Box bb = bounding_box(d);
        out.exists = true;
        out.lo = bb.lo[0];
        out.hi = bb.hi[0];
        return out;
    }
    const FlaggedSet dom = T.domain_window();
    if (!dom.contains(probe))
        return out;
    for (const OperatorPiece& piece : T.op().pieces) {
        if (piece.pred.is_points())
            continue;
        if (!piece.pred.contains(Vector(probe)))
            continue;
        switch (piece.value.kind) {
        case PieceValue::Kind::Point: {
            const double v = piece.value.point_poly[0].scaled(T.scale())(x);
            out = {true, v, v};
            return out;
        }
        case PieceValue::Kind::Interval: {
            out = {true, piece.value.lo_poly[0].scaled(T.scale())(x),
                   piece.value.hi_poly[0].scaled(T.scale())(x)};
            return out;
        }
        case PieceValue::Kind::Constant: {
            const ValueSet s = T.scale() == 1.0 ? piece.value.constant
                                                : piece.value.constant.scaled(T.scale());
            const Box bb = bounding_box(s);
            out = {true, bb.lo[0], bb.hi[0]};
            return out;
        }
        }
    }
    (void)window;
    return out;
}

inline std::vector<double> continuity_candidates(const FrozenOperator& T, int grid) {
    const Box dom = bounding_box(T.op().domain);
    std::vector<double> xs;
    const int n = std::max(2, grid);
    for (int i = 0; i <= n; ++i)
        xs.push_back(dom.lo[0] + (dom.hi[0] - dom.lo[0]) * i / n);
    for (double b : breakpoints_1d(T))
        if (b >= dom.lo[0] && b <= dom.hi[0])
            xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

} // namespace detail

/// Almost-lower-semicontinuity at level eps: at every candidate point the
/// eps-enlarged envelopes over some shrinking neighborhood intersect. The
/// per-radius tests and the radius-to-zero limits are both exact, so
/// "refuted" carries a re-checkable witness.
inline ContinuityCertificate certify_alsc(const FrozenOperator& T, double eps, int grid) {
    ContinuityCertificate cert;
    cert.mode = ContinuityMode::alsc;
    cert.eps = eps;
    cert.grid = grid;
    if (T.dim() != 1) {
        cert.verdict = ContinuityCertificate::Verdict::inconclusive;
        cert.detail = "2D certification is sampled and stays inconclusive";
        return cert;
    }
    const auto radii = detail::shrink_radii();
    const auto bps = detail::breakpoints_1d(T);
    bool all_certified = true;
    for (double x : detail::continuity_candidates(T, grid)) {
        bool point_ok = false;
        for (double r : radii) {
            const auto eb = T.env_bounds(FlaggedInterval{x - r, x + r, false, false});
            if (!eb.any)
                continue;
            if (eb.lo_sup - eb.hi_inf <= 2.0 * eps) {
                point_ok = true;
                break;
            }
        }
        if (point_ok)
            continue;
        // exact radius->0 limits
        double L = -kInf, H = kInf;
        const auto here = T.env_bounds(FlaggedInterval::point(x));
        if (here.any) {
            L = std::max(L, here.lo_sup);
            H = std::min(H, here.hi_inf);
        }
        for (bool right : {false, true}) {
            const auto side = detail::side_limits(T, x, right, bps);
            if (side.exists) {
                L = std::max(L, side.lo);
                H = std::min(H, side.hi);
            }
        }
        if (L - H < 2.0 * eps) {
            continue; // certified in the limit: some radius below 2^-20 works
        }
        if (L - H > 2.0 * eps) {
            cert.verdict = ContinuityCertificate::Verdict::refuted;
            cert.witness = ContinuityWitness{
                x, eps, std::nullopt,
                "envelope limits give sup lo - inf hi = " + std::to_string(L - H) +
                    " > 2 eps at every neighborhood"};
            cert.detail = "refuted at x = " + std::to_string(x);
            return cert;
        }
        all_certified = false; // exact boundary case: leave inconclusive
    }
    cert.verdict = all_certified ? ContinuityCertificate::Verdict::certified
                                 : ContinuityCertificate::Verdict::inconclusive;
    cert.detail = all_certified ? "intersection nonempty at every tested point"
                                : "boundary case encountered";
    return cert;
}

/// Lower semicontinuity probed with balls B(v, eps) around value samples.
/// Certification is sup-exact per radius; refutation uses a sound one-sided
/// lower bound on the distance from v to nearby values.
inline ContinuityCertificate certify_lsc(const FrozenOperator& T, double eps, int grid) {
    ContinuityCertificate cert;
    cert.mode = ContinuityMode::lsc;
    cert.eps = eps;
    cert.grid = grid;
    if (T.dim() != 1) {
        cert.verdict = ContinuityCertificate::Verdict::inconclusive;
        cert.detail = "2D certification is sampled and stays inconclusive";
        return cert;
    }
    const auto radii = detail::shrink_radii();
    bool all_certified = true;
    for (double x : detail::continuity_candidates(T, grid)) {
        const ValueSet value = T.evaluate(Vector(x));
        for (const Vector& v : sample_value_set(value, 6)) {
            bool v_ok = false;
            for (double r : radii) {
                const auto eb = T.env_bounds(FlaggedInterval{x - r, x + r, false, false});
                if (!eb.any)
                    continue;
                const double sup_d =
                    std::max({eb.lo_sup - v.x(), v.x() - eb.hi_inf, 0.0});
                if (sup_d <= eps) {
                    v_ok = true;
                    break;
                }
            }
            if (v_ok)
                continue;
            // one-sided refutation: every point of a whole side-window keeps
            // the values at distance > eps from v
            bool refuted = false;
            for (bool right : {false, true}) {
                for (double r : radii) {
                    const FlaggedInterval side =
                        right ? FlaggedInterval{x, x + r, false, false}
                              : FlaggedInterval{x - r, x, false, false};
                    const auto eb = T.env_bounds(side);
                    if (!eb.any)
                        continue;
                    const double lower_bound =
                        std::max({eb.lo_inf - v.x(), v.x() - eb.hi_sup, 0.0});
                    if (lower_bound > eps) {
                        refuted = true;
                        break;
                    }
                }
                if (refuted)
                    break;
            }
            if (refuted) {
                cert.verdict = ContinuityCertificate::Verdict::refuted;
                cert.witness = ContinuityWitness{
                    x, eps, v.x(),
                    "values near x stay further than eps from v = " + std::to_string(v.x())};
                cert.detail = "refuted at x = " + std::to_string(x);
                return cert;
            }
            all_certified = false;
        }
    }
    cert.verdict = all_certified ? ContinuityCertificate::Verdict::certified
                                 : ContinuityCertificate::Verdict::inconclusive;
    cert.detail = all_certified ? "sample balls stay met on shrinking neighborhoods"
                                : "no certificate at tested radii";
    return cert;
}

inline ContinuityCertificate certify_continuity(const RandomOperator& T, double omega,
                                                ContinuityMode mode, double eps, int grid) {
    const FrozenOperator frozen(T, omega);
    return mode == ContinuityMode::alsc ? certify_alsc(frozen, eps, grid)
                                        : certify_lsc(frozen, eps, grid);
}

// ---------------------------------------------------------------------------

struct InverseClosednessCertificate {
    bool certified = false;
    std::optional<double> witness_y;
    std::optional<double> open_endpoint;
    int tested = 0;
    std::string detail;
};

/// Analytic y-breakpoints: every value-envelope extreme of every piece.
inline std::vector<double> inverse_breakpoints(const FrozenOperator& T) {
    std::vector<double> ys;
    auto push_box = [&ys](const ValueSet& s) {
        const Box bb = bounding_box(s);
        ys.push_back(bb.lo[0]);
        ys.push_back(bb.hi[0]);
    };
    for (const OperatorPiece& piece : T.op().pieces) {
        if (piece.pred.is_points()) {
            for (const Vector& q : piece.pred.points)
                push_box(piece.value.evaluate(q, T.scale()));
            continue;
        }
        if (piece.value.kind == PieceValue::Kind::Constant) {
            push_box(T.scale() == 1.0 ? piece.value.constant
                                      : piece.value.constant.scaled(T.scale()));
            continue;
        }
        const double a = piece.pred.box.lo[0];
        const double b = piece.pred.box.hi[0];
        if (!std::isfinite(a) || !std::isfinite(b))
            continue;
        switch (piece.value.kind) {
        case PieceValue::Kind::Point: {
            const auto r = piece.value.point_poly[0].scaled(T.scale()).range(a, b);
            ys.push_back(r.first);
            ys.push_back(r.second);
            break;
        }
        case PieceValue::Kind::Interval: {
            const auto rl = piece.value.lo_poly[0].scaled(T.scale()).range(a, b);
            const auto rh = piece.value.hi_poly[0].scaled(T.scale()).range(a, b);
            ys.push_back(rl.first);
            ys.push_back(rl.second);
            ys.push_back(rh.first);
            ys.push_back(rh.second);
            break;
        }
        case PieceValue::Kind::Constant:
            break; // handled above
        }
    }
    if (T.diagonal()) {
        push_box(T.scale() == 1.0 ? *T.op().diagonal_default
                                  : T.op().diagonal_default->scaled(T.scale()));
        push_box(T.op().base_value(Vector(T.omega()), T.scale()));
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

/// Certified iff the inverse value at every tested y is a closed finite
/// union of intervals and points.
inline InverseClosednessCertificate certify_inverse_closed(const RandomOperator& T, double omega,
                                                           const std::vector<double>& y_grid) {
    if (T.dim != 1)
        throw std::invalid_argument("preimage requires d=1");
    const FrozenOperator frozen(T, omega);
    InverseClosednessCertificate cert;
    std::vector<double> ys = y_grid;
    for (double y : inverse_breakpoints(frozen))
        ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (double y : ys) {
        const FlaggedSet pre = frozen.preimage(y);
        ++cert.tested;
        if (!pre.is_closed()) {
            cert.certified = false;
            cert.witness_y = y;
            cert.open_endpoint = pre.open_endpoint();
            cert.detail = "inverse value at y = " + std::to_string(y) + " is not closed";
            return cert;
        }
    }
    cert.certified = true;
    cert.detail = "inverse values closed at " + std::to_string(cert.tested) + " tested levels";
    return cert;
}

inline std::vector<double> uniform_y_grid(const FrozenOperator& T, int count) {
    const ValueSet env = T.range_envelope(T.op().domain);
    const Box bb = bounding_box(env);
    const double margin = 0.1 * (bb.hi[0] - bb.lo[0]) + 0.05;
    std::vector<double> ys;
    for (int i = 0; i <= count; ++i)
        ys.push_back(bb.lo[0] - margin + (bb.hi[0] - bb.lo[0] + 2 * margin) * i / count);
    return ys;
}

} // namespace svfix
