#pragma once

#include "fplab/grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fplab {

// Nodal -Delta_h with homogeneous Neumann data (ghost node mirrored across the face).
void apply_neg_laplacian(const Grid& grid, std::span<const double> w, std::span<double> out);

// Symmetric weighted form A = W (-Delta_h); w^T A w is the discrete Dirichlet energy.
void apply_stiffness(const Grid& grid, std::span<const double> w, std::span<double> out);
double dirichlet_energy(const Grid& grid, std::span<const double> w);

double weighted_sum(const Grid& grid, std::span<const double> w);
double weighted_dot(const Grid& grid, std::span<const double> a, std::span<const double> b);
double weighted_l1(const Grid& grid, std::span<const double> w);
double weighted_l2(const Grid& grid, std::span<const double> w);

struct CgOptions {
    double tol = 1e-10;  // relative to the norm of the right-hand side
    int max_iter = 0;    // 0: 20 * (nodes per axis)^2
    bool jacobi = false;
};

struct CgResult {
    int iterations = 0;
    double residual = 0.0;
};

// K = diag(shift) + A on free nodes, identity on pinned nodes. Pinned entries of
// the iterate are treated as zero by the operator; lift inhomogeneous values first.
struct SpdSystem {
    const Grid* grid = nullptr;
    std::vector<double> shift;          // per node, already weighted; empty means zero
    std::vector<std::uint8_t> pinned;   // empty means none
};

void apply_system(const SpdSystem& sys, std::span<const double> x, std::span<double> y);

// Throws SolverError when the cap is reached, ValidationError when K is singular.
CgResult conjugate_gradient(const SpdSystem& sys, std::span<const double> rhs, std::span<double> x,
                            const CgOptions& opt = {});

// Nodal convenience: solve (s - Delta_h) x = rhs with Neumann data; s > 0.
std::vector<double> solve_shifted(const Grid& grid, double s, std::span<const double> rhs,
                                  const CgOptions& opt = {}, CgResult* info = nullptr);

// Thomas algorithm; sub[0] and sup[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs);

} // namespace fplab
