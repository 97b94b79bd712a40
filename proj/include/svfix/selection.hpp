#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "svfix/correspondence.hpp"
#include "svfix/value_set.hpp"

namespace svfix {

/// Continuous eps-approximate selection: overlapping cells (t_i - h, t_i + h)
/// at spacing h, hat weights summing to one, one chosen value per node. 1D
/// fields are piecewise linear, 2D fields bilinear on a tensor grid.
struct SelectionField {
    int dim = 1;
    Box K;
    double eps = 0.0;
    double h = 0.0;
    int nx = 0, ny = 0; // node counts per axis (ny unused in 1D)
    std::vector<Vector> values; // row-major for 2D

    double node_x(int i) const { return K.lo[0] + h * i; }
    double node_y(int j) const { return K.lo[1] + h * j; }

    /// Hat weights at x: the at-most-two (1D) or four (2D) active nodes.
    std::vector<std::pair<int, double>> weights(const Vector& x) const {
        if (!K.contains(x))
            throw std::domain_error("selection evaluated outside K");
        std::vector<std::pair<int, double>> out;
        auto axis = [this](double v, double lo, int n) {
            int j = static_cast<int>(std::floor((v - lo) / h));
            j = std::clamp(j, 0, n - 2);
            const double t = (v - (lo + h * j)) / h;
            return std::pair<int, double>{j, t};
        };
        if (dim == 1) {
            if (nx == 1)
                return {{0, 1.0}};
            const auto [j, t] = axis(x.x(), K.lo[0], nx);
            out.push_back({j, 1.0 - t});
            out.push_back({j + 1, t});
            return out;
        }
        const auto [i, s] = nx == 1 ? std::pair<int, double>{0, 0.0} : axis(x.x(), K.lo[0], nx);
        const auto [j, t] = ny == 1 ? std::pair<int, double>{0, 0.0} : axis(x.y(), K.lo[1], ny);
        out.push_back({j * nx + i, (1.0 - s) * (1.0 - t)});
        if (nx > 1)
            out.push_back({j * nx + i + 1, s * (1.0 - t)});
        if (ny > 1)
            out.push_back({(j + 1) * nx + i, (1.0 - s) * t});
        if (nx > 1 && ny > 1)
            out.push_back({(j + 1) * nx + i + 1, s * t});
        return out;
    }

    Vector evaluate(const Vector& x) const {
        Vector acc = Vector::zero(values.front().dim());
        for (const auto& [idx, w] : weights(x))
            acc = acc + w * values[static_cast<std::size_t>(idx)];
        return acc;
    }

    double lipschitz_bound() const {
        double worst = 0.0;
        if (dim == 1) {
            for (int i = 0; i + 1 < nx; ++i)
                worst = std::max(worst, distance(values[static_cast<std::size_t>(i)],
                                                 values[static_cast<std::size_t>(i) + 1]));
        } else {
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const auto at = [&](int a, int b) {
                        return values[static_cast<std::size_t>(b * nx + a)];
                    };
                    if (i + 1 < nx)
                        worst = std::max(worst, distance(at(i, j), at(i + 1, j)));
                    if (j + 1 < ny)
                        worst = std::max(worst, distance(at(i, j), at(i, j + 1)));
                }
        }
        return h > 0.0 ? worst / h : 0.0;
    }
};

namespace detail {

inline void require_convex_values(const FrozenOperator& T, const Box& K) {
    auto convex = [](const ValueSet& s) {
        if (const auto* iv = s.get_if<IntervalUnionData>())
            return iv->boxes.size() <= 1;
        if (const auto* pts = s.get_if<PointSetData>())
            return pts->points.size() <= 1;
        return true; // balls, polytopes, half-spaces, rays are convex
    };
    if (T.diagonal() && !convex(*T.op().diagonal_default))
        throw std::invalid_argument("approximate selection needs convex values (diagonal default)");
    for (const OperatorPiece& piece : T.op().pieces) {
        if (piece.value.kind != PieceValue::Kind::Constant)
            continue;
        if (piece.pred.is_points()) {
            bool touches = false;
            for (const Vector& q : piece.pred.points)
                touches = touches || K.contains(q);
            if (!touches)
                continue;
        } else if (!piece.pred.box.intersect(K)) {
            continue;
        }
        if (!convex(piece.value.constant))
            throw std::invalid_argument("approximate selection needs convex values (piece " +
                                        piece.id + ")");
    }
}

/// Per-coordinate envelope extremes over a closed sub-box (2D build).
inline bool env_bounds_2d(const FrozenOperator& T, const Box& cell, FrozenOperator::EnvBounds out[2]) {
    bool any = false;
    for (const OperatorPiece& piece : T.op().pieces) {
        std::vector<Box> overlaps;
        if (piece.pred.is_points()) {
            for (const Vector& q : piece.pred.points)
                if (cell.contains(q)) {
                    Box b;
                    b.dim = 2;
                    b.lo = {q.x(), q.y()};
                    b.hi = b.lo;
                    overlaps.push_back(b);
                }
        } else if (auto o = piece.pred.box.intersect(cell)) {
            overlaps.push_back(*o);
        }
        for (const Box& o : overlaps) {
            any = true;
            for (int c = 0; c < 2; ++c) {
                const auto k = static_cast<std::size_t>(c);
                switch (piece.value.kind) {
                case PieceValue::Kind::Point: {
                    const auto r = piece.value.point_poly[k].scaled(T.scale()).range(o.lo[k], o.hi[k]);
                    out[c].absorb(r.first, r.first);
                    out[c].absorb(r.second, r.second);
                    break;
                }
                case PieceValue::Kind::Interval: {
                    const auto rl = piece.value.lo_poly[k].scaled(T.scale()).range(o.lo[k], o.hi[k]);
                    const auto rh = piece.value.hi_poly[k].scaled(T.scale()).range(o.lo[k], o.hi[k]);
                    out[c].lo_inf = std::min(out[c].lo_inf, rl.first);
                    out[c].lo_sup = std::max(out[c].lo_sup, rl.second);
                    out[c].hi_inf = std::min(out[c].hi_inf, rh.first);
                    out[c].hi_sup = std::max(out[c].hi_sup, rh.second);
                    out[c].any = true;
                    break;
                }
                case PieceValue::Kind::Constant: {
                    const Box bb = bounding_box(piece.value.evaluate(Vector(o.lo[0], o.lo[1]), T.scale()));
                    out[c].absorb(bb.lo[k], bb.hi[k]);
                    break;
                }
                }
            }
        }
    }
    return any;
}

} // namespace detail

/// Max grid defect of the field against T, recomputed through set_distance.
inline double verify_selection(const SelectionField& f, const FrozenOperator& T, int grid) {
    double worst = 0.0;
    if (f.dim == 1) {
        for (int i = 0; i <= grid; ++i) {
            const double x = f.K.lo[0] + (f.K.hi[0] - f.K.lo[0]) * i / grid;
            worst = std::max(worst, set_distance(f.evaluate(Vector(x)), T.evaluate(Vector(x))));
        }
        return worst;
    }
    const int side = std::max(256, static_cast<int>(std::lround(std::sqrt(double(grid)))));
    for (int j = 0; j <= side; ++j)
        for (int i = 0; i <= side; ++i) {
            const Vector x(f.K.lo[0] + (f.K.hi[0] - f.K.lo[0]) * i / side,
                           f.K.lo[1] + (f.K.hi[1] - f.K.lo[1]) * j / side);
            worst = std::max(worst, set_distance(f.evaluate(x), T.evaluate(x)));
        }
    return worst;
}

/// Builds the selection field on the compact box K: node values are midpoints
/// (1D) or centroids (2D) of the exact intersection of eps-enlarged
/// envelopes over each overlapping cell; h halves adaptively when a cell
/// intersection comes up empty, to depth 20.
inline SelectionField build_approximate_selection(const FrozenOperator& T, const Box& K,
                                                  double eps, int verify_grid = 10000,
                                                  int max_depth = 20) {
    if (!(eps > 0.0))
        throw std::invalid_argument("eps must be positive");
    detail::require_convex_values(T, K);
    const double width = K.hi[0] - K.lo[0];
    std::string last_witness;
    double h = width > 0.0 ? width / 16.0 : 1.0;
    if (T.dim() == 2)
        h = std::max(h, (K.hi[1] - K.lo[1]) / 16.0);
    for (int depth = 0; depth <= max_depth; ++depth, h *= 0.5) {
        SelectionField f;
        f.dim = T.dim();
        f.K = K;
        f.eps = eps;
        bool empty_cell = false;
        if (T.dim() == 1) {
            const int cells = std::max(1, static_cast<int>(std::ceil(width / h - 1e-12)));
            f.h = width > 0.0 ? width / cells : 1.0;
            f.nx = cells + 1;
            f.values.reserve(static_cast<std::size_t>(f.nx));
            for (int i = 0; i < f.nx && !empty_cell; ++i) {
                const double t = f.node_x(i);
                const FlaggedInterval cell{std::max(t - f.h, K.lo[0]), std::min(t + f.h, K.hi[0]),
                                           true, true};
                const auto eb = T.env_bounds(FlaggedInterval{cell.lo, cell.hi, i == 0,
                                                             i == f.nx - 1});
                if (!eb.any || eb.lo_sup - eps > eb.hi_inf + eps) {
                    empty_cell = true;
                    last_witness = std::to_string(t);
                    break;
                }
                f.values.emplace_back(0.5 * ((eb.lo_sup - eps) + (eb.hi_inf + eps)));
            }
        } else {
            const double eps_axis = eps / std::sqrt(2.0);
            const double wy = K.hi[1] - K.lo[1];
            const int cx = std::max(1, static_cast<int>(std::ceil(width / h - 1e-12)));
            const int cy = std::max(1, static_cast<int>(std::ceil(wy / h - 1e-12)));
            f.h = std::max(width / cx, wy / cy);
            f.nx = cx + 1;
            f.ny = cy + 1;
            for (int j = 0; j < f.ny && !empty_cell; ++j) {
                for (int i = 0; i < f.nx && !empty_cell; ++i) {
                    const Box cell =
                        Box::rect(std::max(f.node_x(i) - f.h, K.lo[0]),
                                  std::min(f.node_x(i) + f.h, K.hi[0]),
                                  std::max(f.node_y(j) - f.h, K.lo[1]),
                                  std::min(f.node_y(j) + f.h, K.hi[1]));
                    FrozenOperator::EnvBounds eb[2];
                    if (!detail::env_bounds_2d(T, cell, eb)) {
                        empty_cell = true;
                        break;
                    }
                    double c[2];
                    for (int axis = 0; axis < 2; ++axis) {
                        const double lo = eb[axis].lo_sup - eps_axis;
                        const double hi = eb[axis].hi_inf + eps_axis;
                        if (lo > hi) {
                            empty_cell = true;
                            last_witness = Vector(f.node_x(i), f.node_y(j)).str();
                            break;
                        }
                        c[axis] = 0.5 * (lo + hi);
                    }
                    if (!empty_cell)
                        f.values.emplace_back(c[0], c[1]);
                }
            }
        }
        if (empty_cell)
            continue;
        const double defect = verify_selection(f, T, verify_grid);
        if (defect <= eps)
            return f;
        last_witness = "defect " + std::to_string(defect) + " at h = " + std::to_string(f.h);
    }
    throw std::runtime_error("a.l.s.c. modulus too coarse at x* = " + last_witness);
}

inline Vector evaluate_selection(const SelectionField& f, const Vector& x) {
    return f.evaluate(x);
}

} // namespace svfix
