#pragma once

#include "fplab/geometry.hpp"
#include "fplab/grid.hpp"
#include "fplab/pde_core.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fplab {

// Truncated capacitary problem in R^3: theta = 1 on B, theta = 0 on the faces
// of [-R, R]^3, harmonic in between. Theta_R is the Dirichlet energy of theta.
struct CapacitaryResult {
    double R = 0.0;
    double h = 0.0;
    double theta_R = 0.0;
    int iterations = 0;
    bool octant = false;     // solved on [0, R]^3 using mirror symmetry
    std::size_t unknowns = 0;
    Grid grid;                      // the truncated (octant) grid
    std::vector<double> potential;  // theta on `grid`
    std::vector<std::uint8_t> pinned;  // B nodes and far faces
};

// Staircase: B is the set of nodes inside the shape. CutEdge: additionally the
// grid edges crossing the boundary of B are shortened to the exact crossing
// point (symmetric ghost-fluid treatment), which makes Theta_R second order in h.
enum class CellBoundary { Staircase, CutEdge };

CapacitaryResult solve_capacitary(const Shape& B, double R, double h, const CgOptions& opt = {},
                                  CellBoundary boundary = CellBoundary::CutEdge);

struct CapacityFit {
    double theta = 0.0;           // limit as R -> infinity
    double slope = 0.0;           // a in theta_R = theta + a / R
    double error_estimate = 0.0;  // largest fit residual
};

// Least-squares fit theta_R = theta + a / R over (R, theta_R) pairs.
// Throws ValidationError on fewer than three radii or a non-monotone sequence.
CapacityFit extrapolate_capacity(std::span<const std::pair<double, double>> samples);

struct CapacityEstimate {
    double theta = 0.0;
    double error_estimate = 0.0;
    std::vector<CapacitaryResult> runs;  // potentials kept only for the finest spacing
    std::vector<CapacityFit> fits;  // one per grid spacing, coarse to fine
};

// Radius extrapolation on each spacing of `spacings`, then Richardson in h
// (second order) across the two finest spacings when more than one is given.
CapacityEstimate estimate_capacity(const Shape& B, std::span<const double> radii, std::span<const double> spacings,
                                   const CgOptions& opt = {}, CellBoundary boundary = CellBoundary::CutEdge);

// Radially symmetric oracle for a ball: conservative finite differences on [rho, R].
double radial_capacity(double rho, double R, int cells);
CapacityFit radial_capacity_limit(double rho, std::span<const double> radii, int cells_per_unit);

// Capacity of a single Dirichlet node of the 7-point lattice with spacing h.
inline double lattice_node_capacity(double h) { return h / kLatticeGreenOrigin3d; }

// k^2 Theta for the critical regime.
double strange_term_coefficient(const ScalingRegime& regime, double theta);

} // namespace fplab
