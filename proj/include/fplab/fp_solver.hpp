#pragma once

#include "fplab/coefficients.hpp"
#include "fplab/grid.hpp"
#include "fplab/pde_core.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fplab {

struct TimeGrid {
    double T = 0.25;
    int steps = 400;

    double dt() const { return T / steps; }
    double t(int m) const { return T * static_cast<double>(m) / steps; }
};

// One separable source term g(x) * phi(t).
struct SourceTerm {
    enum class Profile { Constant, Linear, Sine, Exponential };
    Profile profile = Profile::Constant;
    double rate = 1.0;  // omega in sin(omega t), lambda in exp(lambda t)
    std::vector<double> space;

    double factor(double t) const;
    double integral(double t) const;  // exact int_0^t phi
};

// f(x, t) as a sum of separable terms; empty means f = 0.
struct Source {
    std::vector<SourceTerm> terms;

    bool zero() const { return terms.empty(); }
    double at(std::size_t i, double t) const;
    double integral(std::size_t i, double t) const;
    // int_Omega f(t) on the grid.
    double total(const Grid& grid, double t) const;

    static Source none() { return {}; }
    static Source constant(std::vector<double> g);
    static Source linear(std::vector<double> g);
};

// Stored snapshots of u (density) and v = b u.
struct SolutionField {
    Grid grid;
    std::vector<double> times;
    std::vector<int> steps;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> v;
    double eps = 0.0;
    double delta = 1.0;
    double eta = 1.0;
    std::string regime;

    std::size_t frames() const { return times.size(); }
    std::size_t frame_at(double t) const;  // nearest stored time
};

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double l1 = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
    double energy_grad_cum = 0.0;  // sum dt * v^T A v
    double b_u2 = 0.0;             // int b u^2
};

// Generic backward-Euler march for  storage * dv/dt - Delta v + sink v = f  with
// Neumann data, optional pinned nodes (v = 0) and per-node sink conductances.
struct MarchSpec {
    const Grid* grid = nullptr;
    std::vector<double> storage;  // u = storage * v
    std::vector<double> sink;     // absolute conductance added to the weighted system
    std::vector<std::uint8_t> pinned;
    std::vector<double> v0;
    Source source;
    TimeGrid time;
    CgOptions cg;
    // Called with step 0 (initial state) and after each step.
    std::function<void(int, double, std::span<const double>)> on_step;
};

struct MarchStats {
    long cg_iterations = 0;
    double worst_residual = 0.0;
};

MarchStats march_backward_euler(const MarchSpec& spec);

struct FpProblem {
    Grid grid;
    ScaledCoefficientField coefficient;
    std::vector<double> initial;  // u-bar
    Source source;
    TimeGrid time;
    int store_every = 0;  // 0: about 25 frames
    CgOptions cg;
    double eps = 0.0;
    double eta = 1.0;
    std::string regime;
};

struct FpResult {
    SolutionField solution;
    std::vector<DiagnosticsRow> diagnostics;
    MarchStats stats;
};

FpResult solve_fp(const FpProblem& problem);

// mass(t_m) - mass(0) - sum_k dt int f(t_k) per diagnostics row; needs one row per step.
std::vector<double> mass_balance_residual(const Grid& grid, const std::vector<DiagnosticsRow>& diag,
                                          const Source& source);

struct EnergyTrace {
    double sup_b_u2 = 0.0;
    double grad_cum = 0.0;
    double data_norm = 0.0;  // int b u-bar^2 + int int b f^2
};
EnergyTrace energy_trace(const std::vector<DiagnosticsRow>& diag, double data_norm);

int default_store_every(int steps);

} // namespace fplab
