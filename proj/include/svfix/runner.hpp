#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "svfix/scenario.hpp"

namespace svfix {

/// Exit codes of the command dispatcher.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 2,
    exit_no_fixed_point = 3,
    exit_invalid_scenario = 4,
};

struct RunOptions {
    std::optional<double> tol;
    std::optional<int> grid;
    std::optional<int> omega_cells;
    std::optional<int> n_max;
    std::optional<int> homotopy_steps;
    std::optional<double> oracle_resolution;
    std::optional<Vector> xi;
    std::optional<Vector> eta;
    std::vector<BoundaryCondition> conditions;
    std::optional<Box> restrict_domain; // homotopy C restriction
    std::string report_path;
    std::string csv_path;
};

struct RunOutcome {
    nlohmann::json report;
    int exit_code = exit_ok;
    std::string summary;
};

namespace runner_detail {

using nlohmann::json;

inline json emit_vec(const Vector& v) {
    if (v.dim() == 1)
        return v.x();
    return json::array({v.x(), v.y()});
}

inline std::string csv_vec(const Vector& v) {
    std::ostringstream os;
    os.precision(17);
    if (v.dim() == 1)
        os << v.x();
    else
        os << v.x() << ";" << v.y();
    return os.str();
}

inline json selection_json(const RandomSelection& sel) {
    json out;
    out["uniform"] = sel.uniform;
    if (sel.uniform)
        out["xi"] = emit_vec(sel.uniform_value);
    out["sup_residual"] = sel.sup_residual;
    out["measurability"] = sel.measurability;
    json cells = json::array();
    for (const auto& c : sel.cells)
        cells.push_back(json{{"index", c.index},
                             {"omega", c.omega},
                             {"xi", emit_vec(c.xi)},
                             {"residual", c.residual}});
    out["cells"] = cells;
    json atoms = json::array();
    for (const auto& a : sel.atoms)
        atoms.push_back(json{{"index", a.index},
                             {"omega", a.omega},
                             {"xi", emit_vec(a.xi)},
                             {"residual", a.residual}});
    out["atoms"] = atoms;
    return out;
}

inline json certificates_json(const HypothesisCertificates& c) {
    json out;
    out["n0"] = c.n0;
    out["alsc_certified"] = c.alsc_certified;
    out["inverse_closed"] = c.inverse_closed;
    out["classification"] = c.classification_detail;
    out["continuity"] = c.continuity_detail;
    out["inverse"] = c.inverse_detail;
    out["condensing_or_contractive"] = c.all_condensing_or_contractive;
    if (!c.notes.empty())
        out["notes"] = c.notes;
    return out;
}

inline json approximation_json(const ApproximationReport& rep) {
    json out;
    out["all_verified"] = rep.all_verified;
    out["equality_tol"] = rep.equality_tol;
    auto emit_cells = [](const std::vector<ApproximationCell>& cells) {
        json arr = json::array();
        for (const auto& c : cells)
            arr.push_back(json{{"index", c.index},
                               {"omega", c.omega},
                               {"xi", emit_vec(c.xi)},
                               {"eta", emit_vec(c.eta)},
                               {"d_pair", c.d_pair},
                               {"d_ball", c.d_ball},
                               {"d_inward", c.d_inward},
                               {"residual_xi", c.residual_xi},
                               {"membership", c.membership},
                               {"retraction", c.retraction},
                               {"equalities", c.equalities}});
        return arr;
    };
    out["cells"] = emit_cells(rep.cells);
    out["atoms"] = emit_cells(rep.atoms);
    return out;
}

struct CsvRow {
    int cell_index = 0;
    double omega_rep = 0.0;
    std::string xi, eta, residual, d_pair, d_ball, d_inward;
};

inline void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write csv file: " + path);
    out << "cell_index,omega_rep,xi,eta,residual,d_pair,d_ball,d_inward\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.cell_index << "," << r.omega_rep << "," << r.xi << "," << r.eta << ","
            << r.residual << "," << r.d_pair << "," << r.d_ball << "," << r.d_inward << "\n";
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace runner_detail

/// Dispatches one command against one scenario. Writes the report/CSV files
/// when asked; the returned report carries everything either way.
inline RunOutcome run_scenario(const std::string& command, Scenario scenario,
                               const RunOptions& options) {
    using nlohmann::json;
    using namespace runner_detail;
    const auto t_start = std::chrono::steady_clock::now();

    if (options.tol)
        scenario.params.tol = *options.tol;
    if (options.grid)
        scenario.params.grid = *options.grid;
    if (options.n_max)
        scenario.params.n_max = *options.n_max;
    if (options.homotopy_steps)
        scenario.params.homotopy_steps = *options.homotopy_steps;
    if (options.oracle_resolution)
        scenario.params.oracle_resolution = *options.oracle_resolution;
    if (options.omega_cells)
        scenario.omega = OmegaPartition(scenario.omega.a, scenario.omega.b, *options.omega_cells,
                                        scenario.omega.atoms);

    RunOutcome out;
    json& rep = out.report;
    rep["command"] = command;
    rep["scenario"] = scenario.name.empty() ? "(file)" : scenario.name;
    rep["params"] = json{{"tol", scenario.params.tol},
                         {"grid", scenario.params.grid},
                         {"n_max", scenario.params.n_max},
                         {"omega_cells", scenario.omega.cells},
                         {"homotopy_steps", scenario.params.homotopy_steps},
                         {"oracle_resolution", scenario.params.oracle_resolution}};
    if (!scenario.notes.empty())
        rep["notes"] = scenario.notes;

    std::vector<CsvRow> csv_rows;
    const RandomOperator& T = scenario.op;
    const OmegaPartition& P = scenario.omega;

    try {
        if (command == "certify") {
            json certs;
            bool ok = true;
            try {
                certs["n0"] = find_n0(T, P, T.domain);
            } catch (const std::domain_error& ex) {
                certs["n0_error"] = ex.what();
                ok = false;
            }
            const double w0 = P.representative(0);
            const FrozenOperator frozen(T, w0);
            if (T.dim == 1) {
                const auto alsc =
                    certify_alsc(frozen, scenario.params.continuity_eps,
                                 std::min(scenario.params.grid, 4096));
                const auto lsc = certify_lsc(frozen, scenario.params.continuity_eps,
                                             std::min(scenario.params.grid, 2048));
                certs["alsc"] = alsc.verdict_name();
                certs["lsc"] = lsc.verdict_name();
                if (lsc.witness)
                    certs["lsc_witness"] =
                        json{{"x", lsc.witness->x}, {"ball_radius", lsc.witness->eps}};
                ok = ok && alsc.certified();
                const auto inv = certify_inverse_closed(T, w0, uniform_y_grid(frozen, 256));
                certs["inverse_closed"] = inv.certified;
                certs["inverse_detail"] = inv.detail;
                ok = ok && inv.certified;
            }
            const auto cls = classify_map(frozen, T.domain);
            certs["classification"] = cls.evidence;
            if (certs.contains("n0")) {
                const auto inv = find_invariant_compact(T, w0, T.domain, certs["n0"].get<int>());
                certs["invariant_compact"] = scenario_json::emit_value_set(inv.K);
                certs["invariant_verified"] = inv.containment_verified;
            }
            rep["certificates"] = certs;
            out.exit_code = ok ? exit_ok : exit_verification_failed;
            out.summary = ok ? "certificates established" : "certification failed";
        } else if (command == "solve") {
            const auto solved = random_solve(T, P, T.domain, scenario.params);
            rep["certificates"] = certificates_json(solved.certificates);
            rep["selection"] = selection_json(solved.selection);
            const bool ok = solved.selection.sup_residual <= scenario.params.tol;
            out.exit_code = ok ? exit_ok : exit_verification_failed;
            std::ostringstream os;
            os << (solved.selection.uniform ? "uniform" : "per-cell") << " selection, sup residual "
               << solved.selection.sup_residual;
            if (solved.selection.uniform)
                os << ", xi = " << csv_vec(solved.selection.uniform_value);
            out.summary = os.str();
            for (const auto* r : solved.selection.all())
                csv_rows.push_back(CsvRow{r->atom ? P.cells + r->index : r->index, r->omega,
                                          csv_vec(r->xi), "", fmt(r->residual), "", "", ""});
        } else if (command == "approx") {
            const auto report = random_approximation(T, P, scenario.params);
            rep["certificates"] = certificates_json(report.certificates);
            rep["approximation"] = approximation_json(report);
            out.exit_code = report.all_verified ? exit_ok : exit_verification_failed;
            out.summary = report.all_verified ? "approximation pair verified on every cell"
                                              : "approximation verification failed";
            for (const auto* c : report.all())
                csv_rows.push_back(CsvRow{c->atom ? P.cells + c->index : c->index, c->omega,
                                          csv_vec(c->xi), csv_vec(c->eta), fmt(c->residual_xi),
                                          fmt(c->d_pair), fmt(c->d_ball), fmt(c->d_inward)});
        } else if (command == "verify") {
            if (!options.xi)
                throw ScenarioError("verify needs --xi");
            const auto report =
                verify_pair(T, P, *options.xi, options.eta, scenario.params);
            rep["approximation"] = approximation_json(report);
            out.exit_code = report.all_verified ? exit_ok : exit_verification_failed;
            double d_pair = 0.0;
            if (!report.cells.empty())
                d_pair = report.cells.front().d_pair;
            std::ostringstream os;
            os << (report.all_verified ? "pair verified" : "pair verification FAILED")
               << ", ||eta - xi|| = " << d_pair;
            out.summary = os.str();
            for (const auto* c : report.all())
                csv_rows.push_back(CsvRow{c->atom ? P.cells + c->index : c->index, c->omega,
                                          csv_vec(c->xi), csv_vec(c->eta), fmt(c->residual_xi),
                                          fmt(c->d_pair), fmt(c->d_ball), fmt(c->d_inward)});
        } else if (command == "homotopy") {
            ValueSet C = T.domain;
            if (options.restrict_domain)
                C = T.dim == 1 ? ValueSet::interval(options.restrict_domain->lo[0],
                                                    options.restrict_domain->hi[0])
                               : ValueSet::box(*options.restrict_domain);
            const auto result =
                homotopy_random(T, P, C, scenario.params.homotopy_steps, scenario.params);
            rep["selection"] = selection_json(result.selection);
            rep["premise_certified"] = result.premise_certified;
            rep["diam_c"] = result.diam_c;
            rep["classification"] = result.classification;
            json cells = json::array();
            for (const auto& c : result.cells) {
                json jc{{"index", c.index},
                        {"atom", c.atom},
                        {"omega", c.omega},
                        {"limit", c.limit},
                        {"limit_residual", c.limit_residual},
                        {"max_gap_times_n", c.max_gap_times_n}};
                cells.push_back(jc);
            }
            rep["homotopy"] = cells;
            out.exit_code = result.premise_certified &&
                                    result.selection.sup_residual <= scenario.params.tol
                                ? exit_ok
                                : exit_verification_failed;
            std::ostringstream os;
            os << "condition-M premise " << (result.premise_certified ? "certified" : "FAILED")
               << ", limit sup residual " << result.selection.sup_residual;
            out.summary = os.str();
            for (const auto* r : result.selection.all())
                csv_rows.push_back(CsvRow{r->atom ? P.cells + r->index : r->index, r->omega,
                                          csv_vec(r->xi), "", fmt(r->residual), "", "", ""});
        } else if (command == "boundary") {
            if (options.conditions.empty())
                throw ScenarioError("boundary needs --conditions");
            const auto result = boundary_random(T, P, options.conditions, scenario.params);
            rep["applicable"] = result.applicable;
            rep["message"] = result.message;
            json outcomes = json::array();
            for (const auto& oc : result.outcomes) {
                json jo{{"index", oc.index},
                        {"atom", oc.atom},
                        {"omega", oc.omega},
                        {"d_inward", oc.d_inward},
                        {"already_fixed", oc.already_fixed},
                        {"contradiction", oc.contradiction}};
                json verdicts = json::array();
                for (const auto& v : oc.verdicts)
                    verdicts.push_back(json{{"condition", condition_name(v.condition)},
                                            {"holds", v.holds},
                                            {"detail", v.detail}});
                jo["verdicts"] = verdicts;
                outcomes.push_back(jo);
            }
            rep["outcomes"] = outcomes;
            if (result.applicable) {
                rep["selection"] = selection_json(result.selection);
                for (const auto* r : result.selection.all())
                    csv_rows.push_back(CsvRow{r->atom ? P.cells + r->index : r->index, r->omega,
                                              csv_vec(r->xi), "", fmt(r->residual), "", "", ""});
            }
            out.exit_code = result.applicable ? exit_ok : exit_no_fixed_point;
            out.summary = result.message;
        } else if (command == "oracle") {
            json cells = json::array();
            double overall_min = kInf;
            for (const auto& repn : detail::representatives(P)) {
                const FrozenOperator frozen(T, repn.omega);
                const auto scan = oracle_scan(frozen, T.domain, scenario.params.oracle_resolution);
                overall_min = std::min(overall_min, scan.min_residual);
                json jc{{"index", repn.index},
                        {"atom", repn.atom},
                        {"omega", repn.omega},
                        {"min_residual", scan.min_residual},
                        {"near_minima", scan.minima.size()}};
                json pts = json::array();
                for (std::size_t i = 0; i < scan.minima.size() && i < 32; ++i)
                    pts.push_back(json{{"x", emit_vec(scan.minima[i].first)},
                                       {"residual", scan.minima[i].second}});
                jc["minima"] = pts;
                cells.push_back(jc);
                if (!scan.minima.empty())
                    csv_rows.push_back(CsvRow{repn.atom ? P.cells + repn.index : repn.index,
                                              repn.omega, csv_vec(scan.minima.front().first), "",
                                              fmt(scan.minima.front().second), "", "", ""});
            }
            rep["cells"] = cells;
            rep["min_residual"] = overall_min;
            out.exit_code = exit_ok;
            out.summary = "oracle scan min residual " + fmt(overall_min);
        } else {
            throw ScenarioError("unknown command: " + command);
        }
    } catch (const ScenarioError& ex) {
        rep["error"] = ex.what();
        out.exit_code = exit_invalid_scenario;
        out.summary = ex.what();
    } catch (const std::invalid_argument& ex) {
        rep["error"] = ex.what();
        out.exit_code = exit_invalid_scenario;
        out.summary = ex.what();
    } catch (const std::domain_error& ex) {
        rep["error"] = ex.what();
        out.exit_code = exit_invalid_scenario;
        out.summary = ex.what();
    } catch (const NoFixedPointError& ex) {
        rep["error"] = ex.what();
        out.exit_code = exit_no_fixed_point;
        out.summary = ex.what();
    } catch (const VerificationError& ex) {
        rep["error"] = ex.what();
        out.exit_code = exit_verification_failed;
        out.summary = ex.what();
    }

    const auto t_end = std::chrono::steady_clock::now();
    rep["timings"] = json{
        {"total_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count()}};

    if (!options.report_path.empty()) {
        std::ofstream f(options.report_path);
        if (!f)
            throw std::runtime_error("cannot write report file: " + options.report_path);
        f << rep.dump(2) << "\n";
    }
    if (!options.csv_path.empty())
        write_csv(options.csv_path, csv_rows);
    return out;
}

} // namespace svfix
