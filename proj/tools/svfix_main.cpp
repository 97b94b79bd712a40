#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "svfix/svfix.hpp"

namespace {

svfix::Vector parse_point(const std::string& text) {
    std::vector<double> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        coords.push_back(std::stod(part));
    if (coords.size() == 1)
        return svfix::Vector(coords[0]);
    if (coords.size() == 2)
        return svfix::Vector(coords[0], coords[1]);
    throw svfix::ScenarioError("points are 1 or 2 comma-separated coordinates");
}

svfix::Box parse_restrict(const std::string& text) {
    // "lo,hi" (1D) or "lo,hi;lo,hi" (2D)
    std::vector<std::pair<double, double>> axes;
    std::stringstream ss(text);
    std::string axis;
    while (std::getline(ss, axis, ';')) {
        const auto comma = axis.find(',');
        if (comma == std::string::npos)
            throw svfix::ScenarioError("restriction axis needs lo,hi");
        axes.emplace_back(std::stod(axis.substr(0, comma)), std::stod(axis.substr(comma + 1)));
    }
    if (axes.size() == 1)
        return svfix::Box::interval(axes[0].first, axes[0].second);
    if (axes.size() == 2)
        return svfix::Box::rect(axes[0].first, axes[0].second, axes[1].first, axes[1].second);
    throw svfix::ScenarioError("restriction needs 1 or 2 axes");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"svfix: fixed points and best approximations of set-valued random operators"};
    app.require_subcommand(1);

    std::string scenario_path, builtin_name, report_path, csv_path;
    std::string xi_text, eta_text, conditions_text, restrict_text;
    double tol = -1.0, oracle_resolution = -1.0;
    int grid = -1, omega_cells = -1, n_max = -1, homotopy_steps = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file");
        cmd->add_option("--builtin", builtin_name, "built-in scenario (example1, example2)");
        cmd->add_option("--tol", tol, "verification tolerance (default 1e-9)");
        cmd->add_option("--grid", grid, "verification grid points (default 10000)");
        cmd->add_option("--omega-cells", omega_cells, "partition cells (default 64)");
        cmd->add_option("--n-max", n_max, "max enlargement-loop iterations (default 256)");
        cmd->add_option("--report", report_path, "write the JSON report here");
        cmd->add_option("--csv", csv_path, "write per-cell rows here");
        cmd->add_option("--oracle-resolution", oracle_resolution, "oracle grid resolution");
    };

    CLI::App* certify = app.add_subcommand("certify", "check the solver hypotheses");
    CLI::App* solve = app.add_subcommand("solve", "find a random fixed point");
    CLI::App* approx = app.add_subcommand("approx", "run the approximation pipeline");
    CLI::App* verify = app.add_subcommand("verify", "verify a given (xi, eta) pair");
    CLI::App* homotopy = app.add_subcommand("homotopy", "condition-M homotopy driver");
    CLI::App* boundary = app.add_subcommand("boundary", "boundary-condition driver");
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force residual scan");
    for (CLI::App* cmd : {certify, solve, approx, verify, homotopy, boundary, oracle})
        add_common(cmd);
    verify->add_option("--xi", xi_text, "candidate fixed point / retraction image")->required();
    verify->add_option("--eta", eta_text, "value-set point paired with xi");
    boundary->add_option("--conditions", conditions_text,
                         "comma list from i,ii,iii,iv,v,vi");
    homotopy->add_option("--restrict", restrict_text, "restrict C to lo,hi (per axis, ; separated)");
    homotopy->add_option("--homotopy-steps", homotopy_steps, "deformation steps N (default 64)");

    CLI11_PARSE(app, argc, argv);
    CLI::App* active = app.get_subcommands().front();

    try {
        svfix::Scenario scenario;
        if (!builtin_name.empty()) {
            const auto s = svfix::builtin_scenario(builtin_name);
            if (!s) {
                std::cerr << "unknown builtin: " << builtin_name << "\n";
                return svfix::exit_invalid_scenario;
            }
            scenario = *s;
        } else if (!scenario_path.empty()) {
            std::ifstream f(scenario_path);
            if (!f) {
                std::cerr << "cannot open scenario file: " << scenario_path << "\n";
                return svfix::exit_invalid_scenario;
            }
            nlohmann::json j;
            f >> j;
            scenario = svfix::parse_scenario(j);
        } else {
            std::cerr << "need --scenario or --builtin\n";
            return svfix::exit_invalid_scenario;
        }

        svfix::RunOptions options;
        if (tol >= 0.0)
            options.tol = tol;
        if (grid > 0)
            options.grid = grid;
        if (omega_cells > 0)
            options.omega_cells = omega_cells;
        if (n_max > 0)
            options.n_max = n_max;
        if (homotopy_steps > 0)
            options.homotopy_steps = homotopy_steps;
        if (oracle_resolution > 0.0)
            options.oracle_resolution = oracle_resolution;
        if (!xi_text.empty())
            options.xi = parse_point(xi_text);
        if (!eta_text.empty())
            options.eta = parse_point(eta_text);
        if (!restrict_text.empty())
            options.restrict_domain = parse_restrict(restrict_text);
        if (!conditions_text.empty()) {
            std::stringstream ss(conditions_text);
            std::string name;
            while (std::getline(ss, name, ',')) {
                const auto cond = svfix::condition_from_name(name);
                if (!cond) {
                    std::cerr << "unknown boundary condition: " << name << "\n";
                    return svfix::exit_invalid_scenario;
                }
                options.conditions.push_back(*cond);
            }
        }
        options.report_path = report_path;
        options.csv_path = csv_path;

        const svfix::RunOutcome outcome = svfix::run_scenario(active->get_name(), scenario, options);
        std::cout << outcome.summary << "\n";
        return outcome.exit_code;
    } catch (const svfix::ScenarioError& ex) {
        std::cerr << "invalid scenario: " << ex.what() << "\n";
        return svfix::exit_invalid_scenario;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
