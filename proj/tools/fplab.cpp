#include "fplab/cell.hpp"
#include "fplab/degenerate.hpp"
#include "fplab/errors.hpp"
#include "fplab/fp_solver.hpp"
#include "fplab/harness.hpp"
#include "fplab/homogenized.hpp"
#include "fplab/oned.hpp"
#include "fplab/report.hpp"
#include "fplab/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

using namespace fplab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Args {
    std::string config;
    std::string out = "out";
    long seed = 0;
};

std::string in_dir(const Args& a, const std::string& name) { return (fs::path(a.out) / name).string(); }

void write_json(const Args& a, const std::string& name, const json& j) { write_text(in_dir(a, name), j.dump(2) + "\n"); }

InclusionGeometry geometry_for(const ScenarioConfig& c, const Grid& g, double eps)
{
    ResolutionPolicy p = c.policy();
    if (p.allow_point_model && p.reference_capacity <= 0.0 && !std::holds_alternative<Ball>(c.shape))
        p.reference_capacity = configured_capacity(c);
    return build_inclusions(g, eps, c.eta.eta(eps), c.shape, p);
}

void cmd_solve(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    require(!c.delta.empty(), "solve needs a delta value");
    const Grid g = c.grid();
    const double eps = c.eps.front(), delta = c.delta.front();
    const InclusionGeometry geo = geometry_for(c, g, eps);
    FpProblem p;
    p.grid = g;
    p.coefficient = assemble_coefficient(g, geo, c.coefficient, delta);
    p.initial = c.initial.sample(g);
    p.source = c.source.build(g);
    p.time = c.time();
    p.store_every = c.store_every;
    p.cg = c.cg;
    p.eps = eps;
    p.eta = geo.eta;
    p.regime = regime_name(c.regime().regime);
    const FpResult r = solve_fp(p);
    if (c.output.snapshots) write_text(in_dir(a, "snapshots.csv"), snapshots_csv(r.solution, c.output.snapshot_every));
    write_text(in_dir(a, "diagnostics.csv"), diagnostics_csv(r.diagnostics));
    const auto res = mass_balance_residual(g, r.diagnostics, p.source);
    double worst = 0.0;
    for (double x : res) worst = std::max(worst, std::abs(x));
    write_json(a, "summary.json",
               {{"eps", eps}, {"delta", delta}, {"eta", geo.eta}, {"regime", p.regime}, {"inclusions", geo.cells.size()},
                {"model", geo.model == InclusionModel::Point ? "point" : "staircase"},
                {"max_mass_residual", worst}, {"cg_iterations", r.stats.cg_iterations}, {"seed", a.seed}});
}

void cmd_degenerate(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    const Grid g = c.grid();
    const double eps = c.eps.front();
    DegenerateProblem p;
    p.grid = g;
    p.geometry = geometry_for(c, g, eps);
    p.coefficient = c.coefficient;
    p.initial = c.initial.sample(g);
    p.source = c.source.build(g);
    p.time = c.time();
    p.store_every = c.store_every;
    p.cg = c.cg;
    p.eps = eps;
    p.regime = regime_name(c.regime().regime);
    p.interface = c.interface;
    const DegenerateSolution s = solve_degenerate(p);
    if (c.output.snapshots) write_text(in_dir(a, "snapshots.csv"), snapshots_csv(s.solution, c.output.snapshot_every));
    write_text(in_dir(a, "degenerate.csv"), degenerate_csv(s.balance));
    json measure = json::array();
    const double T = s.solution.times.back();
    for (const auto& phi : weak_test_battery(g))
        measure.push_back({{"phi", phi.name},
                           {"volume_route", surface_flux_measure(s, T, phi.values)},
                           {"direct_route", surface_flux_measure_direct(s, T, phi.values)}});
    write_json(a, "measure.json", {{"t", T}, {"eps", eps}, {"eta", p.geometry.eta}, {"measure", measure}, {"seed", a.seed}});
}

void cmd_cell(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    CgOptions o;
    o.tol = 1e-10;
    const CapacityEstimate e = estimate_capacity(c.shape, c.cell.radii, c.cell.spacings, o, c.cell.boundary);
    write_text(in_dir(a, "cell.csv"), cell_csv(e));
    write_text(in_dir(a, "cell.json"), cell_json(e) + "\n");
}

void cmd_homog(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    const Grid g = c.grid();
    HomogenizedProblem p;
    p.grid = g;
    p.variant = c.homog.variant;
    p.initial = c.initial.sample(g);
    p.source = c.source.build(g);
    p.time = c.time();
    p.store_every = c.store_every;
    p.cg = c.cg;
    if (p.variant == HomogenizedVariant::PDDelta)
        p.mean = harmonic_mean_delta_field(g, c.coefficient, c.homog.delta, c.shape, c.eta.constant ? c.eta.value : 1.0);
    else
        p.mean = harmonic_mean_field(g, c.coefficient);
    if (p.variant == HomogenizedVariant::DMD)
        p.capacitary = c.homog.capacitary ? *c.homog.capacitary
                                          : strange_term_coefficient(c.regime(), configured_capacity(c));
    json summary{{"variant", variant_name(p.variant)}, {"capacitary", p.capacitary}, {"seed", a.seed}};
    if (p.variant == HomogenizedVariant::AD) {
        const SolutionField s = solve_ad(p);
        if (c.output.snapshots) write_text(in_dir(a, "homogenized.csv"), snapshots_csv(s, c.output.snapshot_every));
    } else {
        const HomogenizedSolution h = solve_homogenized(p);
        const auto* m0 = h.m0.empty() ? nullptr : &h.m0;
        if (c.output.snapshots)
            write_text(in_dir(a, "homogenized.csv"), snapshots_csv(h.solution, c.output.snapshot_every, m0));
        write_text(in_dir(a, "diagnostics.csv"), diagnostics_csv(h.diagnostics));
        if (m0) {
            json totals = json::array();
            for (std::size_t k = 0; k < h.m0.size(); ++k)
                totals.push_back({{"t", h.solution.times[k]}, {"m0_total", weighted_sum(g, h.m0[k])}});
            summary["limiting_measure_total"] = totals;
        }
    }
    write_json(a, "summary.json", summary);
}

void cmd_oned(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    const InterfaceValues iv = explicit_interface_values(c.oned.spec);
    json levels = json::array();
    for (std::size_t k = 0; k < c.oned.h.size(); ++k) {
        const OneDSolution s = solve_two_phase_1d(c.oned.spec, c.oned.h[k], c.oned.dt[k]);
        const auto abel = abel_identity_residual(s);
        write_text(in_dir(a, "oned_" + std::to_string(k) + ".csv"), oned_csv(s, abel));
        double worst = 0.0;
        for (std::size_t m = 0; m < abel.size(); ++m)
            if (s.times[m] >= 0.25 * c.oned.spec.T) worst = std::max(worst, std::abs(abel[m]));
        levels.push_back({{"h", c.oned.h[k]},
                          {"dt", c.oned.dt[k]},
                          {"u_minus", s.u_minus.back()},
                          {"u_plus", s.u_plus.back()},
                          {"abel_residual_max", worst}});
    }
    write_json(a, "oned.json",
               {{"explicit", {{"u_minus", iv.u_minus}, {"u_plus", iv.u_plus}, {"Phi", iv.Phi}, {"phi1", iv.phi1}, {"phi2", iv.phi2}}},
                {"levels", levels},
                {"seed", a.seed}});
}

void cmd_blowup(const Args& a)
{
    const ScenarioConfig c = load_scenario(a.config);
    const BlowupResult r = run_blowup(c.blowup.alpha, c.blowup.j_max, c.blowup.options);
    write_text(in_dir(a, "blowup.csv"), blowup_csv(r));
    write_text(in_dir(a, "blowup_snapshots.csv"), blowup_snapshots_csv(r));
    write_json(a, "blowup.json", {{"alpha", r.alpha}, {"l1_initial", r.l1_initial}, {"max_l1_drift", r.max_l1_drift}, {"seed", a.seed}});
}

void emit_report(const Args& a, const ConvergenceReport& r)
{
    const std::string stem = "scheme" + std::string(r.scheme == "one" ? "1" : "2") + "_" + r.regime;
    write_text(in_dir(a, stem + ".csv"), report_csv(r));
    write_text(in_dir(a, stem + ".json"), report_to_json(r) + "\n");
}

void cmd_sweep(const Args& a, bool one)
{
    const ScenarioConfig c = load_scenario(a.config);
    emit_report(a, one ? run_scheme_one(c) : run_scheme_two(c));
}

// {"reports": [...]} re-reads emitted reports; {"scenarios": [...]} runs both
// schemes for each scenario. Paths are relative to the config file.
void cmd_commutation(const Args& a)
{
    json j;
    try {
        j = json::parse(read_text(a.config));
    } catch (const json::parse_error& e) {
        throw ValidationError(a.config + ": not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError(a.config + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "reports" && it.key() != "scenarios")
            throw ValidationError(a.config + ": unknown key '" + it.key() + "' (reports, scenarios)");
    const fs::path base = fs::path(a.config).parent_path();
    auto paths = [&](const char* key) {
        std::vector<std::string> out;
        if (!j.contains(key)) return out;
        if (!j[key].is_array()) throw ValidationError(a.config + ": '" + key + "' must be an array of paths");
        for (const auto& p : j[key]) {
            if (!p.is_string()) throw ValidationError(a.config + ": '" + key + "' must be an array of paths");
            out.push_back((base / p.get<std::string>()).string());
        }
        return out;
    };
    std::vector<ConvergenceReport> reports;
    for (const auto& p : paths("reports")) reports.push_back(report_from_json(read_text(p)));
    for (const auto& p : paths("scenarios")) {
        const ScenarioConfig c = load_scenario(p);
        reports.push_back(run_scheme_one(c));
        emit_report(a, reports.back());
        reports.push_back(run_scheme_two(c));
        emit_report(a, reports.back());
    }
    require(!reports.empty(), a.config + ": no reports or scenarios given");
    const CommutationTable t = commutation_report(reports);
    write_text(in_dir(a, "commutation.csv"), commutation_csv(t));
    write_text(in_dir(a, "commutation.json"), commutation_json(t) + "\n");
    for (const auto& r : t.rows)
        std::cout << r.regime << ": " << r.verdict() << " (expected " << r.expected << ")\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fokker-Planck homogenization laboratory"};
    app.require_subcommand(1);
    Args args;
    struct Command {
        const char* name;
        const char* help;
        std::function<void(const Args&)> run;
    };
    const std::vector<Command> commands{
        {"solve", "non-degenerate fine-scale solve (first eps and delta of the config)", cmd_solve},
        {"degenerate", "delta -> 0 limit problem (first eps of the config)", cmd_degenerate},
        {"cell", "capacity of the inclusion shape", cmd_cell},
        {"homog", "homogenized problem selected by homog.variant", cmd_homog},
        {"oned", "one-dimensional two-phase problem and Abel identity", cmd_oned},
        {"blowup", "one-dimensional blow-up construction", cmd_blowup},
        {"sweep-scheme1", "delta -> 0 first, then the eps sweep", [](const Args& a) { cmd_sweep(a, true); }},
        {"sweep-scheme2", "eps sweep at fixed delta, then the delta sweep", [](const Args& a) { cmd_sweep(a, false); }},
        {"commutation", "commutation table from reports or scenarios", cmd_commutation},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", args.config, "scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", args.out, "output directory")->capture_default_str();
        sub->add_option("--seed", args.seed, "reserved; no randomness in the solvers")->capture_default_str();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        for (std::size_t k = 0; k < commands.size(); ++k)
            if (app.got_subcommand(commands[k].name)) commands[k].run(args);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
