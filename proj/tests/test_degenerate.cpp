#include "doctest.h"

#include "fplab/coefficients.hpp"
#include "fplab/degenerate.hpp"
#include "fplab/errors.hpp"

#include <cmath>
#include <numbers>

using namespace fplab;

namespace {

struct Setup {
    Grid grid;
    InclusionGeometry geo;
};

Setup single_ball(int cells)
{
    Box b;
    b.dim = 3;
    Setup s;
    s.grid = Grid::with_cells(b, cells);
    s.geo = build_inclusions(s.grid, 1.0, 1.0, Ball{0.25});
    return s;
}

DegenerateProblem problem_on(const Setup& s, std::vector<double> init, int steps = 40)
{
    DegenerateProblem p;
    p.grid = s.grid;
    p.geometry = s.geo;
    p.coefficient = CoefficientSpec::constant(1.0);
    p.initial = std::move(init);
    p.time.T = 0.1;
    p.time.steps = steps;
    p.store_every = 1;
    p.cg.tol = 1e-13;
    return p;
}

} // namespace

TEST_CASE("constant data: inner density stays put while the outer mass drains")
{
    const auto s = single_ball(16);
    const auto sol = solve_degenerate(problem_on(s, std::vector<double>(s.grid.size(), 2.0)));
    for (const auto& u : sol.solution.u)
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!sol.is_outer(i)) CHECK(u[i] == 2.0);
    for (std::size_t m = 1; m < sol.balance.size(); ++m)
        CHECK(sol.balance[m].outer_mass < sol.balance[m - 1].outer_mass);
    for (const auto& v : sol.solution.v)
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!sol.is_outer(i)) CHECK(v[i] == 0.0);
}

TEST_CASE("unit source with zero data gives F = t inside")
{
    const auto s = single_ball(12);
    auto p = problem_on(s, std::vector<double>(s.grid.size(), 0.0));
    p.source = Source::constant(std::vector<double>(s.grid.size(), 1.0));
    const auto sol = solve_degenerate(p);
    for (std::size_t k = 0; k < sol.solution.frames(); ++k)
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            if (!sol.is_outer(i)) CHECK(sol.solution.u[k][i] == doctest::Approx(sol.solution.times[k]));
    for (const auto& row : sol.balance) CHECK(std::abs(row.residual) < 1e-10);
}

TEST_CASE("total measure equals the initial mass and the measure starts at zero")
{
    const auto s = single_ball(16);
    std::vector<double> init(s.grid.size());
    for (std::size_t i = 0; i < init.size(); ++i) init[i] = 1.0 + 0.5 * std::cos(std::numbers::pi * s.grid.coords(i)[0]);
    const auto sol = solve_degenerate(problem_on(s, init));
    const std::vector<double> one(s.grid.size(), 1.0);
    CHECK(surface_flux_measure(sol, 0.0, one) == 0.0);
    CHECK(surface_flux_measure_direct(sol, 0.0, one) == 0.0);
    const double m0 = weighted_sum(s.grid, init);
    for (const auto& row : sol.balance) CHECK(std::abs(row.residual) < 1e-10 * m0);

    // volume route with phi = 1 against the bookkeeping of the solver
    const double T = sol.solution.times.back();
    const double mu = surface_flux_measure(sol, T, one);
    CHECK(mu == doctest::Approx(sol.balance.back().boundary_measure).epsilon(1e-9));
    double lost = 0.0;
    const auto F = sol.inner_density(T);
    for (std::size_t i = 0; i < init.size(); ++i)
        if (sol.is_outer(i)) lost += s.grid.weight(i) * (F[i] - sol.solution.u.back()[i]);
    CHECK(mu == doctest::Approx(lost).epsilon(1e-12));
    CHECK(mu > 0.0);
}

TEST_CASE("measure increases in time and both routes agree to first order")
{
    const auto s = single_ball(16);
    const auto sol = solve_degenerate(problem_on(s, std::vector<double>(s.grid.size(), 1.0), 80));
    const std::vector<double> one(s.grid.size(), 1.0);
    double prev = 0.0;
    for (double t : sol.solution.times) {
        const double mu = surface_flux_measure(sol, t, one);
        CHECK(mu >= prev);
        prev = mu;
    }
    for (const auto& phi : weak_test_battery(s.grid)) {
        const double a = surface_flux_measure(sol, 0.1, phi.values);
        const double b = surface_flux_measure_direct(sol, 0.1, phi.values);
        CHECK(std::abs(a - b) <= 0.05 * std::abs(surface_flux_measure(sol, 0.1, one)));
    }
}

TEST_CASE("strip and interior diagnostics")
{
    const auto s = single_ball(16);
    const auto sol = solve_degenerate(problem_on(s, std::vector<double>(s.grid.size(), 0.0)));
    const std::vector<double> one(s.grid.size(), 1.0);
    CHECK_THROWS_AS(strip_mass(sol.solution, s.geo, 0.5 * s.grid.h(), one, 0.0), ValidationError);
    CHECK(strip_mass(sol.solution, s.geo, 0.125, one, 0.1) == 0.0);
    CHECK(interior_convergence_error(sol.solution, s.geo, 0.125, 0.1, sol.inner_density(0.1)) == 0.0);

    const auto depth = interface_depth(s.grid, s.geo);
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!s.geo.inclusion_mask[i]) continue;
        const Point x = s.grid.coords(i);
        const double r = std::sqrt((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) + (x[2] - 0.5) * (x[2] - 0.5));
        CHECK(depth[i] == doctest::Approx(0.25 - r));
    }
}

TEST_CASE("weak test battery is the documented one")
{
    Box b;
    b.dim = 3;
    const Grid g = Grid::with_cells(b, 4);
    const auto bat = weak_test_battery(g);
    REQUIRE(bat.size() == 4);
    CHECK(bat[0].name == "one");
    CHECK(bat[1].name == "x1");
    CHECK(bat[2].name == "cos_pi_x1");
    CHECK(bat[3].name == "cos_pi_x1_cos_pi_x2");
    const std::size_t i = g.index(4, 0, 0);
    CHECK(bat[1].values[i] == doctest::Approx(1.0));
    CHECK(bat[2].values[i] == doctest::Approx(-1.0));
    CHECK(bat[3].values[i] == doctest::Approx(-1.0));
}

TEST_CASE("the degenerate problem needs an outer region and inclusions")
{
    const auto s = single_ball(8);
    auto p = problem_on(s, std::vector<double>(s.grid.size(), 1.0));
    p.initial.pop_back();
    CHECK_THROWS_AS(solve_degenerate(p), ValidationError);
}

TEST_CASE("cut-edge conductance follows the exact crossing of a ball")
{
    Box b;
    b.dim = 3;
    Setup s;
    s.grid = Grid::with_cells(b, 16);
    s.geo = build_inclusions(s.grid, 1.0, 1.0, Ball{0.23});
    const double h = s.grid.h();
    const auto sink = cut_edge_sink(s.grid, s.geo);
    // outer node (0.75, 0.5, 0.5): one interface edge, crossing at radius 0.23
    const double frac = (0.25 - 0.23) / h;
    CHECK(sink[s.grid.index(12, 8, 8)] == doctest::Approx(h * (1.0 / frac - 1.0)).epsilon(1e-9));
    for (std::size_t i = 0; i < sink.size(); ++i)
        if (s.geo.inclusion_mask[i]) CHECK(sink[i] == 0.0);
}

TEST_CASE("cut-edge interface drains faster and keeps the bookkeeping exact")
{
    const auto s = single_ball(16);
    const std::vector<double> init(s.grid.size(), 1.0);
    auto p = problem_on(s, init, 80);
    const auto stair = solve_degenerate(p);
    p.interface = CellBoundary::CutEdge;
    const auto cut = solve_degenerate(p);
    CHECK(cut.balance.back().outer_mass < stair.balance.back().outer_mass);
    const double m0 = weighted_sum(s.grid, init);
    for (const auto& row : cut.balance) CHECK(std::abs(row.residual) < 1e-10 * m0);
    const std::vector<double> one(s.grid.size(), 1.0);
    const double mu = surface_flux_measure(cut, 0.1, one);
    CHECK(mu == doctest::Approx(cut.balance.back().boundary_measure).epsilon(1e-9));
    CHECK(std::abs(surface_flux_measure_direct(cut, 0.1, one) - mu) <= 0.05 * mu);
}
