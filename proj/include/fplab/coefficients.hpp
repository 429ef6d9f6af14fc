#pragma once

#include "fplab/geometry.hpp"
#include "fplab/grid.hpp"

#include <string>
#include <vector>

namespace fplab {

// b(x, y) = a(x) p(y), p being Y-periodic. Only a fixed registry of built-in
// profiles is accepted; see macro_profile_ids() and cell_profile_ids().
struct CoefficientSpec {
    enum class Kind { Constant, Separable, Tabulated };
    Kind kind = Kind::Constant;
    double value = 1.0;                 // Constant
    std::string a_id = "one";           // Separable / Tabulated macro factor
    std::string p_id = "one";           // Separable cell profile
    int table_points = 0;               // Tabulated: samples per axis of Y
    std::vector<double> table;          // Tabulated: table_points^n values, row-major

    static CoefficientSpec constant(double v);
    static CoefficientSpec separable(std::string a, std::string p);
};

std::vector<std::string> macro_profile_ids();
std::vector<std::string> cell_profile_ids();

double macro_factor(const CoefficientSpec& s, const Point& x, int dim);
double cell_factor(const CoefficientSpec& s, const Point& y, int dim);
double evaluate(const CoefficientSpec& s, const Point& x, const Point& y, int dim);
// Lower and upper bounds of b over the domain (sampled for macro factors).
std::pair<double, double> coefficient_bounds(const CoefficientSpec& s, const Box& domain);
void validate(const CoefficientSpec& s, int dim);

// Nodal b_{eps,delta}. `reciprocal` is the storage coefficient 1/b used by the
// solver; for point inclusions it carries the volume fraction of the inclusion.
struct ScaledCoefficientField {
    double delta = 1.0;
    double lower_bound = 0.0;
    std::vector<double> b;
    std::vector<double> reciprocal;
};

ScaledCoefficientField assemble_coefficient(const Grid& grid, const InclusionGeometry& geo,
                                            const CoefficientSpec& spec, double delta);
// Inclusion-free field b(x, {x/eps}) on the lattice of `lattice`.
ScaledCoefficientField assemble_coefficient(const Grid& grid, const Lattice& lattice, const CoefficientSpec& spec);

// M_Y(b^{-1})(x) by midpoint tensor quadrature (order points per axis).
double harmonic_cell_mean(const CoefficientSpec& s, const Point& x, int dim, int order = 64);
// int_{eta B} 1/(delta b) + int_{Y \ eta B} 1/b.
double harmonic_cell_mean_delta(const CoefficientSpec& s, const Point& x, int dim, double delta, const Shape& shape,
                                double eta = 1.0, int order = 64);
std::vector<double> harmonic_mean_field(const Grid& grid, const CoefficientSpec& s, int order = 64);
std::vector<double> harmonic_mean_delta_field(const Grid& grid, const CoefficientSpec& s, double delta,
                                              const Shape& shape, double eta = 1.0, int order = 64);

} // namespace fplab
