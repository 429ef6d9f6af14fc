#pragma once

#include "fplab/grid.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace fplab {

// [r] = k iff r in [k - 1/2, k + 1/2); {r} = r - [r] in [-1/2, 1/2).
long integer_part(double r);
double fractional_part(double r);

using CellIndex = std::array<long, 3>;

// Periodic tiling of R^n by cubes origin + eps*(xi + Y), Y = [-1/2, 1/2)^n.
struct Lattice {
    int dim = 3;
    double eps = 1.0;
    Point origin{0.0, 0.0, 0.0};

    CellIndex cell_of(const Point& x) const;
    Point centre(const CellIndex& xi) const;
    // Reduced coordinate y in Y of x relative to its own cell.
    Point reduced(const Point& x) const;
    // Default placement: cells flush with the lower corner of the domain.
    static Lattice flush(const Box& domain, double eps);
};

// Integer description of a lattice on a grid: cell xi covers the grid indices
// [origin + m*xi - m/2, origin + m*xi + m/2) per axis, m = eps/h.
struct CellLayout {
    int dim = 3;
    long m = 2;
    std::array<long, 3> origin{0, 0, 0};
    std::array<long, 3> lo{0, 0, 0};  // Xi_eps index range, inclusive
    std::array<long, 3> hi{0, 0, 0};

    // Cell index along one axis of a grid index (true floor division).
    long cell_along(int axis, long index) const;
    bool contains_cell(const CellIndex& xi) const;
    std::size_t cell_count() const;
};

// Throws ValidationError for a misaligned grid (eps/h not an even integer,
// origin off the grid) or when no cell fits.
CellLayout cell_layout(const Grid& grid, const Lattice& lattice);

struct Ball {
    double radius = 0.25;
};
struct AxisBox {
    Point half_width{0.25, 0.25, 0.25};
};
// Generic shape given by a signed distance (negative inside) plus its radii.
struct ImplicitShape {
    std::function<double(const Point&)> signed_distance;
    double inscribed = 0.0;
    double circumscribed = 0.0;
    double volume = 0.0;
    bool mirror_symmetric = false;
    std::string name = "implicit";
};
using Shape = std::variant<Ball, AxisBox, ImplicitShape>;

double shape_signed_distance(const Shape& s, const Point& y, int dim);
bool shape_contains(const Shape& s, const Point& y, int dim);
double inscribed_radius(const Shape& s, int dim);
double circumscribed_radius(const Shape& s, int dim);
double shape_volume(const Shape& s, int dim);
bool mirror_symmetric(const Shape& s);
std::string shape_name(const Shape& s);

// Lattice Green's function of -Delta_h at the origin for the 7-point stencil,
// G(0) = c / h with c = Watson's simple-cubic integral / 2.
inline constexpr double kLatticeGreenOrigin3d = 0.2527310098;

enum class InclusionModel { Staircase, Point };

struct ResolutionPolicy {
    // Staircase inclusions thinner than this many grid steps are rejected.
    double min_radius_in_h = 0.25;
    // Allow the capacitance-matched point model when the inclusion is below one grid step.
    bool allow_point_model = false;
    // Capacity of the reference shape B; <= 0 means use the closed form for a ball.
    double reference_capacity = 0.0;
};

// Nodes of the grid classified against the inclusions eps*(xi + eta*B).
struct InclusionGeometry {
    Lattice lattice;
    Shape shape;
    double eta = 1.0;
    InclusionModel model = InclusionModel::Staircase;
    std::vector<CellIndex> cells;              // Xi_eps
    std::vector<std::uint8_t> inclusion_mask;  // staircase Omega^1 nodes
    std::vector<std::uint8_t> in_cells;        // node lies in hat-Omega
    std::vector<std::size_t> centre_nodes;     // node at each cell centre
    // Interface edges (inner node, outer node) between Omega^1 and Omega^2.
    std::vector<std::array<std::size_t, 2>> interface_edges;
    double physical_radius = 0.0;     // eta * inscribed(B) * eps
    double point_volume = 0.0;        // |eps*eta*B| per inclusion
    double point_capacity = 0.0;      // capacity of eps*eta*B
    double point_sink = 0.0;          // lattice-corrected sink conductance (point model)

    std::size_t inclusion_node_count() const;
    // Distance of a node inside its inclusion to the inclusion boundary (physical units).
    double depth(const Grid& g, std::size_t node) const;
};

InclusionGeometry build_inclusions(const Grid& grid, double eps, double eta, const Shape& shape,
                                   const ResolutionPolicy& policy = {});
InclusionGeometry build_inclusions(const Grid& grid, const Lattice& lattice, double eta, const Shape& shape,
                                   const ResolutionPolicy& policy = {});

enum class Regime { Subcritical, Critical, Supercritical, ConstantEta };

struct ScalingRegime {
    Regime regime = Regime::ConstantEta;
    double c = 1.0;
    double p = 0.0;
    int dim = 3;
    // Critical: c^{n/2-1}; subcritical: 0; supercritical and constant eta: +inf.
    double k = std::numeric_limits<double>::infinity();

    double eta(double eps) const;
};

ScalingRegime classify_regime(double c, double p, int dim);
std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

} // namespace fplab
