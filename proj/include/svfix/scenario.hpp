#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "svfix/correspondence.hpp"
#include "svfix/random_driver.hpp"

namespace svfix {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One runnable problem: dimension, domain, operator, omega partition,
/// optional unit-ball frame, solver parameters.
struct Scenario {
    int dimension = 1;
    RandomOperator op;
    OmegaPartition omega;
    SolverParams params;
    std::vector<std::string> notes;
    std::string name;
};

namespace scenario_json {

using nlohmann::json;

inline json emit_vector(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i)
        a.push_back(v[i]);
    return a;
}

inline Vector parse_vector(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ScenarioError("point must be an array of length " + std::to_string(dim));
    return dim == 1 ? Vector(j[0].get<double>())
                    : Vector(j[0].get<double>(), j[1].get<double>());
}

inline json emit_value_set(const ValueSet& s) {
    json out;
    if (const auto* pts = s.get_if<PointSetData>()) {
        out["type"] = "points";
        json arr = json::array();
        for (const Vector& p : pts->points)
            arr.push_back(emit_vector(p));
        out["points"] = arr;
    } else if (const auto* iv = s.get_if<IntervalUnionData>()) {
        out["type"] = "intervals";
        json arr = json::array();
        for (const Box& b : iv->boxes) {
            json box = json::array();
            for (int i = 0; i < b.dim; ++i)
                box.push_back(json::array({b.lo[static_cast<std::size_t>(i)],
                                           b.hi[static_cast<std::size_t>(i)]}));
            arr.push_back(box);
        }
        out["boxes"] = arr;
    } else if (const auto* ball = s.get_if<BallData>()) {
        out["type"] = "ball";
        out["center"] = emit_vector(ball->center);
        out["radius"] = ball->radius;
    } else if (const auto* poly = s.get_if<PolytopeData>()) {
        out["type"] = "polytope";
        json arr = json::array();
        for (const Vector& p : poly->vertices)
            arr.push_back(emit_vector(p));
        out["vertices"] = arr;
    } else if (const auto* hs = s.get_if<HalfSpaceData>()) {
        out["type"] = "half_space";
        out["normal"] = emit_vector(hs->normal);
        out["offset"] = hs->offset;
    } else if (const auto* ray = s.get_if<RayData>()) {
        out["type"] = "ray";
        out["origin"] = emit_vector(ray->origin);
        out["direction"] = emit_vector(ray->direction);
    }
    if (s.inflation() > 0.0)
        out["inflation"] = s.inflation();
    return out;
}

inline ValueSet parse_value_set(const json& j, int dim) {
    if (!j.is_object() || !j.contains("type"))
        throw ScenarioError("value set needs a type field");
    const std::string type = j.at("type").get<std::string>();
    ValueSet s;
    if (type == "points") {
        std::vector<Vector> pts;
        for (const auto& p : j.at("points"))
            pts.push_back(parse_vector(p, dim));
        s = ValueSet::points(pts);
    } else if (type == "intervals") {
        std::vector<Box> boxes;
        for (const auto& jb : j.at("boxes")) {
            Box b;
            b.dim = dim;
            if (static_cast<int>(jb.size()) != dim)
                throw ScenarioError("box needs one [lo, hi] pair per coordinate");
            for (int i = 0; i < dim; ++i) {
                b.lo[static_cast<std::size_t>(i)] = jb[static_cast<std::size_t>(i)][0].get<double>();
                b.hi[static_cast<std::size_t>(i)] = jb[static_cast<std::size_t>(i)][1].get<double>();
            }
            if (!b.valid())
                throw ScenarioError("box bounds out of order");
            boxes.push_back(b);
        }
        s = ValueSet::interval_union(boxes);
    } else if (type == "ball") {
        s = ValueSet::ball(parse_vector(j.at("center"), dim), j.at("radius").get<double>());
    } else if (type == "polytope") {
        std::vector<Vector> verts;
        for (const auto& p : j.at("vertices"))
            verts.push_back(parse_vector(p, dim));
        s = ValueSet::polytope(verts);
    } else if (type == "half_space") {
        s = ValueSet::half_space(parse_vector(j.at("normal"), dim), j.at("offset").get<double>());
    } else if (type == "ray") {
        s = ValueSet::ray(parse_vector(j.at("origin"), dim), parse_vector(j.at("direction"), dim));
    } else {
        throw ScenarioError("unknown value set type: " + type);
    }
    if (j.contains("inflation"))
        s = s.inflated(j.at("inflation").get<double>());
    return s;
}

inline json emit_quadratic(const Quadratic& q) { return json::array({q.c0, q.c1, q.c2}); }

inline Quadratic parse_quadratic(const json& j) {
    if (!j.is_array() || j.empty() || j.size() > 3)
        throw ScenarioError("polynomial must be [c0], [c0,c1] or [c0,c1,c2]");
    Quadratic q;
    q.c0 = j[0].get<double>();
    if (j.size() > 1)
        q.c1 = j[1].get<double>();
    if (j.size() > 2)
        q.c2 = j[2].get<double>();
    return q;
}

inline json emit_bound(double v) {
    if (v == kInf)
        return "inf";
    if (v == -kInf)
        return "-inf";
    return v;
}

inline double parse_bound(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
        throw ScenarioError("bad interval bound: " + s);
    }
    return j.get<double>();
}

inline json emit_piece(const OperatorPiece& p, int dim) {
    json out;
    json jif;
    if (p.pred.is_points()) {
        json pts = json::array();
        for (const Vector& q : p.pred.points)
            pts.push_back(emit_vector(q));
        jif["points"] = pts;
    } else {
        json box = json::array(), closed = json::array();
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            box.push_back(json::array({emit_bound(p.pred.box.lo[k]), emit_bound(p.pred.box.hi[k])}));
            closed.push_back(json::array({p.pred.lo_closed[k], p.pred.hi_closed[k]}));
        }
        jif["box"] = box;
        jif["closed"] = closed;
    }
    out["if"] = jif;
    json val;
    switch (p.value.kind) {
    case PieceValue::Kind::Point: {
        for (int i = 0; i < dim; ++i)
            val["point"].push_back(emit_quadratic(p.value.point_poly[static_cast<std::size_t>(i)]));
        break;
    }
    case PieceValue::Kind::Interval: {
        for (int i = 0; i < dim; ++i) {
            val["lo"].push_back(emit_quadratic(p.value.lo_poly[static_cast<std::size_t>(i)]));
            val["hi"].push_back(emit_quadratic(p.value.hi_poly[static_cast<std::size_t>(i)]));
        }
        break;
    }
    case PieceValue::Kind::Constant:
        val["set"] = emit_value_set(p.value.constant);
        break;
    }
    out["value"] = val;
    if (!p.id.empty())
        out["id"] = p.id;
    return out;
}

inline OperatorPiece parse_piece(const json& j, int dim, int index) {
    OperatorPiece p;
    p.id = j.contains("id") ? j.at("id").get<std::string>() : "piece " + std::to_string(index);
    const json& jif = j.at("if");
    if (jif.contains("points")) {
        std::vector<Vector> pts;
        for (const auto& q : jif.at("points"))
            pts.push_back(parse_vector(q, dim));
        p.pred = PiecePredicate::singleton(pts);
    } else {
        const json& box = jif.at("box");
        if (static_cast<int>(box.size()) != dim)
            throw ScenarioError("predicate box needs one [lo, hi] pair per coordinate");
        p.pred.box.dim = dim;
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            p.pred.box.lo[k] = parse_bound(box[k][0]);
            p.pred.box.hi[k] = parse_bound(box[k][1]);
        }
        if (jif.contains("closed")) {
            const json& closed = jif.at("closed");
            for (int i = 0; i < dim; ++i) {
                const auto k = static_cast<std::size_t>(i);
                p.pred.lo_closed[k] = closed[k][0].get<bool>();
                p.pred.hi_closed[k] = closed[k][1].get<bool>();
            }
        }
        for (int i = 0; i < dim; ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (!std::isfinite(p.pred.box.lo[k]))
                p.pred.lo_closed[k] = false;
            if (!std::isfinite(p.pred.box.hi[k]))
                p.pred.hi_closed[k] = false;
        }
    }
    const json& val = j.at("value");
    if (val.contains("point")) {
        PieceValue v;
        v.kind = PieceValue::Kind::Point;
        for (int i = 0; i < dim; ++i)
            v.point_poly[static_cast<std::size_t>(i)] =
                parse_quadratic(val.at("point")[static_cast<std::size_t>(i)]);
        p.value = v;
    } else if (val.contains("lo")) {
        PieceValue v;
        v.kind = PieceValue::Kind::Interval;
        for (int i = 0; i < dim; ++i) {
            v.lo_poly[static_cast<std::size_t>(i)] =
                parse_quadratic(val.at("lo")[static_cast<std::size_t>(i)]);
            v.hi_poly[static_cast<std::size_t>(i)] =
                parse_quadratic(val.at("hi")[static_cast<std::size_t>(i)]);
        }
        p.value = v;
    } else if (val.contains("set")) {
        p.value = PieceValue::constant_set(parse_value_set(val.at("set"), dim));
    } else {
        throw ScenarioError("piece value needs point, lo/hi, or set");
    }
    return p;
}

} // namespace scenario_json

inline nlohmann::json emit_scenario(const Scenario& s) {
    using namespace scenario_json;
    json out;
    out["dimension"] = s.dimension;
    out["domain"] = emit_value_set(s.op.domain);
    json op;
    json pieces = json::array();
    for (const auto& p : s.op.pieces)
        pieces.push_back(emit_piece(p, s.dimension));
    op["pieces"] = pieces;
    if (s.op.diagonal_default)
        op["diagonal"] = json{{"default", emit_value_set(*s.op.diagonal_default)}};
    out["operator"] = op;
    json omega;
    omega["interval"] = json::array({s.omega.a, s.omega.b});
    omega["cells"] = s.omega.cells;
    omega["atoms"] = s.omega.atoms;
    out["omega"] = omega;
    if (s.op.frame) {
        out["frame"] = json{{"radius_inner", s.op.frame->radius_inner},
                            {"radius_outer", s.op.frame->radius_outer}};
    }
    json params;
    params["tol"] = s.params.tol;
    params["n_max"] = s.params.n_max;
    params["grid"] = s.params.grid;
    params["oracle_resolution"] = s.params.oracle_resolution;
    params["homotopy_steps"] = s.params.homotopy_steps;
    params["continuity_eps"] = s.params.continuity_eps;
    out["params"] = params;
    if (!s.notes.empty())
        out["notes"] = s.notes;
    if (!s.name.empty())
        out["name"] = s.name;
    return out;
}

inline Scenario parse_scenario(const nlohmann::json& j) {
    using namespace scenario_json;
    Scenario s;
    try {
        s.dimension = j.at("dimension").get<int>();
        if (s.dimension != 1 && s.dimension != 2)
            throw ScenarioError("dimension must be 1 or 2");
        s.op.dim = s.dimension;
        s.op.domain = parse_value_set(j.at("domain"), s.dimension);
        const json& op = j.at("operator");
        int index = 0;
        for (const auto& jp : op.at("pieces"))
            s.op.pieces.push_back(parse_piece(jp, s.dimension, index++));
        if (op.contains("diagonal"))
            s.op.diagonal_default =
                parse_value_set(op.at("diagonal").at("default"), s.dimension);
        const json& omega = j.at("omega");
        s.omega = OmegaPartition(omega.at("interval")[0].get<double>(),
                                 omega.at("interval")[1].get<double>(),
                                 omega.at("cells").get<int>(),
                                 omega.contains("atoms")
                                     ? omega.at("atoms").get<std::vector<double>>()
                                     : std::vector<double>{});
        if (j.contains("frame")) {
            UnitBallFrame f;
            f.radius_inner = j.at("frame").at("radius_inner").get<double>();
            f.radius_outer = j.at("frame").at("radius_outer").get<double>();
            if (!(f.radius_inner > 0.0) || !(f.radius_inner < f.radius_outer))
                throw ScenarioError("frame needs 0 < radius_inner < radius_outer");
            s.op.frame = f;
        }
        if (j.contains("params")) {
            const json& p = j.at("params");
            if (p.contains("tol"))
                s.params.tol = p.at("tol").get<double>();
            if (p.contains("n_max"))
                s.params.n_max = p.at("n_max").get<int>();
            if (p.contains("grid"))
                s.params.grid = p.at("grid").get<int>();
            if (p.contains("oracle_resolution"))
                s.params.oracle_resolution = p.at("oracle_resolution").get<double>();
            if (p.contains("homotopy_steps"))
                s.params.homotopy_steps = p.at("homotopy_steps").get<int>();
            if (p.contains("continuity_eps"))
                s.params.continuity_eps = p.at("continuity_eps").get<double>();
        }
        if (j.contains("notes"))
            s.notes = j.at("notes").get<std::vector<std::string>>();
        if (j.contains("name"))
            s.name = j.at("name").get<std::string>();
        if (j.contains("notes"))
            s.op.notes = s.notes;
    } catch (const nlohmann::json::exception& ex) {
        throw ScenarioError(std::string("scenario schema violation: ") + ex.what());
    }
    const auto issues = validate_operator(s.op);
    if (!issues.empty())
        throw ScenarioError("invalid scenario: " + issues.front());
    return s;
}

// ---------------------------------------------------------------------------
// built-in worked examples

/// The half-line operator: base map with the parabola branch and the
/// [1/10, 1/2] needle at 15/32, diagonal default [0.00005, 1/2]; omega
/// truncated to [0, 2] with the three interesting atoms.
inline Scenario builtin_example1() {
    Scenario s;
    s.name = "example1";
    s.dimension = 1;
    s.op.dim = 1;
    s.op.domain = ValueSet::interval(0.0, 2.0);
    const double x_needle = 15.0 / 32.0;
    OperatorPiece p1{PiecePredicate::interval(0.0, 0.01, true, true),
                     PieceValue::moving_point(Quadratic::constant(0.00005)), "flat"};
    OperatorPiece p2{PiecePredicate::interval(0.01, x_needle, false, false),
                     PieceValue::moving_point(Quadratic(0.0, 0.0, 0.5)), "parabola-left"};
    OperatorPiece p3{PiecePredicate::singleton({Vector(x_needle)}),
                     PieceValue::moving_interval(Quadratic::constant(0.1), Quadratic::constant(0.5)),
                     "needle"};
    OperatorPiece p4{PiecePredicate::interval(x_needle, 1.0, false, true),
                     PieceValue::moving_point(Quadratic(0.0, 0.0, 0.5)), "parabola-right"};
    OperatorPiece p5{PiecePredicate::interval(1.0, kInf, false, false),
                     PieceValue::moving_point(Quadratic::constant(0.5)), "tail"};
    s.op.pieces = {p1, p2, p3, p4, p5};
    s.op.diagonal_default = ValueSet::interval(0.00005, 0.5);
    s.omega = OmegaPartition(0.0, 2.0, 64, {0.00005, x_needle, 1.0});
    s.notes = {"omega and domain truncated from [0, inf) to [0, 2]"};
    s.op.notes = s.notes;
    return s;
}

/// The symmetric interval operator with ball values around moving centers,
/// E(R, [-1,1]) frame, diagonal default [-1.99995, 5/2].
inline Scenario builtin_example2() {
    Scenario s;
    s.name = "example2";
    s.dimension = 1;
    s.op.dim = 1;
    s.op.domain = ValueSet::interval(-2.0, 2.0);
    const double xn = 15.0 / 32.0;
    const Quadratic lo(-2.0, 0.0, 0.5), hi(2.0, 0.0, 0.5);
    OperatorPiece flat{PiecePredicate::interval(-0.01, 0.01, true, true),
                       PieceValue::moving_interval(Quadratic::constant(-1.99995),
                                                   Quadratic::constant(2.00005)),
                       "flat"};
    OperatorPiece q1{PiecePredicate::interval(-1.0, -xn, true, false),
                     PieceValue::moving_interval(lo, hi), "parabola-a"};
    OperatorPiece q2{PiecePredicate::interval(-xn, -0.01, false, true),
                     PieceValue::moving_interval(lo, hi), "parabola-b"};
    OperatorPiece q3{PiecePredicate::interval(0.01, xn, false, false),
                     PieceValue::moving_interval(lo, hi), "parabola-c"};
    OperatorPiece q4{PiecePredicate::interval(xn, 1.0, false, true),
                     PieceValue::moving_interval(lo, hi), "parabola-d"};
    OperatorPiece needles{PiecePredicate::singleton({Vector(-xn), Vector(xn)}),
                          PieceValue::constant_set(ValueSet::interval(-1.9, 2.5)), "needles"};
    OperatorPiece outer_a{PiecePredicate::interval(-2.0, -1.0, true, false),
                          PieceValue::constant_set(ValueSet::interval(-1.5, 2.5)), "outer-a"};
    OperatorPiece outer_b{PiecePredicate::interval(1.0, 2.0, false, true),
                          PieceValue::constant_set(ValueSet::interval(-1.5, 2.5)), "outer-b"};
    s.op.pieces = {flat, needles, q1, q2, q3, q4, outer_a, outer_b};
    s.op.diagonal_default = ValueSet::interval(-1.99995, 2.5);
    s.op.frame = UnitBallFrame{1.0, 2.0};
    s.omega = OmegaPartition(-2.0, 2.0, 64, {-xn, xn, 1.0});
    return s;
}

inline std::optional<Scenario> builtin_scenario(const std::string& name) {
    if (name == "example1")
        return builtin_example1();
    if (name == "example2")
        return builtin_example2();
    return std::nullopt;
}

} // namespace svfix
