#pragma once

#include "fplab/cell.hpp"
#include "fplab/coefficients.hpp"
#include "fplab/fp_solver.hpp"
#include "fplab/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fplab {

struct DegenerateProblem {
    Grid grid;
    InclusionGeometry geometry;
    CoefficientSpec coefficient;
    std::vector<double> initial;  // u-bar on all nodes
    Source source;
    TimeGrid time;
    int store_every = 0;
    CgOptions cg;
    double eps = 0.0;
    std::string regime;
    // CutEdge places the Dirichlet condition v = 0 at the exact crossing of each
    // interface edge instead of at the inclusion node.
    CellBoundary interface = CellBoundary::Staircase;
};

struct DegenerateBalanceRow {
    double t = 0.0;
    double outer_mass = 0.0;
    double inner_mass = 0.0;
    double boundary_measure = 0.0;
    double total = 0.0;
    double residual = 0.0;
};

// Outer solution with v = 0 on inclusion nodes; `solution.u` holds F on the
// inclusion nodes so that it is the limiting density on the whole domain.
struct DegenerateSolution {
    SolutionField solution;
    InclusionGeometry geometry;
    std::vector<double> initial;
    Source source;
    std::vector<double> sink;                // absolute conductance per node (point model, cut edges)
    std::vector<std::vector<double>> w_rect; // sum_m dt v^{m}, one per stored frame
    std::vector<double> v0;
    std::vector<DegenerateBalanceRow> balance;
    MarchStats stats;

    // F(x, t) = u-bar + int_0^t f
    std::vector<double> inner_density(double t) const;
    bool is_outer(std::size_t node) const { return !geometry.inclusion_mask[node]; }
};

DegenerateSolution solve_degenerate(const DegenerateProblem& problem);

// Extra diagonal conductance on the outer end of every interface edge for the
// cut-edge treatment: (W_i / h^2) (1/s - 1), s the fraction of the edge outside.
std::vector<double> cut_edge_sink(const Grid& grid, const InclusionGeometry& geo);

// Boundary measure mu_t(phi) of the stored frame nearest to t.
// Volume route: int_{Omega^2} (F - u(t)) phi - int_0^t int grad(bu) . grad(phi).
double surface_flux_measure(const DegenerateSolution& sol, double t, std::span<const double> phi);
// Direct route: flux of the trapezoidal w across the interface edges (and sinks), weighted by phi.
double surface_flux_measure_direct(const DegenerateSolution& sol, double t, std::span<const double> phi);

// Distance from an inclusion node to the interface (analytic for balls, erosion otherwise).
std::vector<double> interface_depth(const Grid& grid, const InclusionGeometry& geo);

// int over {x in Omega^1 : dist(x, Gamma) < sigma} of u_delta phi at the frame nearest to t.
double strip_mass(const SolutionField& fine, const InclusionGeometry& geo, double sigma, std::span<const double> phi,
                  double t);
// || u_delta(t) - F(t) || over Omega^1 minus the strip.
double interior_convergence_error(const SolutionField& fine, const InclusionGeometry& geo, double sigma, double t,
                                  std::span<const double> F);

// The test battery phi in {1, x1, cos(pi x1), cos(pi x1) cos(pi x2)}, in box-relative coordinates.
struct TestFunction {
    std::string name;
    std::vector<double> values;
};
std::vector<TestFunction> weak_test_battery(const Grid& grid);

} // namespace fplab
