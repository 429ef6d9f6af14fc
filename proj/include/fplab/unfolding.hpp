#pragma once

#include "fplab/geometry.hpp"
#include "fplab/grid.hpp"

#include <span>
#include <vector>

namespace fplab {

// Samples of T_eps(w)(x, y) (or T_{eps,eta}(w)(x, z) with z = y / eta). The
// value depends on x only through its cell, so storage is one micro block of
// micro^dim samples per cell of Xi_eps. The micro grid is the restriction of
// the macro grid to one cell: y_j = j / micro - 1/2, j = 0 .. micro-1.
struct UnfoldedField {
    int dim = 3;
    long micro = 2;
    double eps = 1.0;
    double eta = 1.0;
    std::vector<CellIndex> cells;
    std::vector<double> values;     // cells.size() * micro_count(), micro index row-major (axis 0 fastest)
    std::vector<long> node_cell;    // per macro node: slot in `cells`, -1 outside hat-Omega

    std::size_t micro_count() const;
    double micro_spacing() const { return 1.0 / (static_cast<double>(micro) * eta); }
    // Micro coordinate (y for eta = 1, z = y / eta otherwise).
    Point micro_point(std::size_t j) const;
    // T(w)(x, point j); zero for x outside hat-Omega.
    double at(std::size_t node, std::size_t j) const;
    double& block(std::size_t cell, std::size_t j) { return values[cell * micro_count() + j]; }
    double block(std::size_t cell, std::size_t j) const { return values[cell * micro_count() + j]; }
};

UnfoldedField unfold(const Grid& grid, const Lattice& lattice, std::span<const double> w);

// M_eps(w): per-cell mean of the micro samples, zero on Lambda_eps.
std::vector<double> cell_average(const Grid& grid, const Lattice& lattice, std::span<const double> w);

// Z_eps(w) = T_eps(w) - M_eps(w).
UnfoldedField oscillation(const Grid& grid, const Lattice& lattice, std::span<const double> w);

// T_{eps,eta}(w)(x, z) = T_eps(w)(x, eta z) on (1/eta) Y. Throws when the
// micro grid has fewer than two samples across eta * Y.
UnfoldedField unfold_small_holes(const Grid& grid, const Lattice& lattice, double eta, std::span<const double> w);

// Forward difference of the micro samples along `axis` in micro units
// (backward difference at the last sample).
UnfoldedField micro_gradient(const UnfoldedField& f, int axis);

// Nodal forward difference of w along `axis` (backward at the upper face).
std::vector<double> nodal_gradient(const Grid& grid, std::span<const double> w, int axis);

// int_{Omega x micro-domain} |T| and its L2 analogue with the micro spacing as weight.
double unfolded_l1(const UnfoldedField& f);
double unfolded_l2(const UnfoldedField& f);

// Lower-node rectangle rule over the half-open domain, matching the unfolded quadrature.
double rectangle_l1(const Grid& grid, std::span<const double> w);
double rectangle_l2(const Grid& grid, std::span<const double> w);

} // namespace fplab
