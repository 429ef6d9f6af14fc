#pragma once

#include <vector>

namespace fplab {

// u_t = (beta u)_xx on R with beta = beta1 for x < 0 and beta2 for x > 0,
// u(x, 0) = alpha, approximated on [-L, L] with no-flux ends.
struct TwoPhaseSpec {
    double alpha = 1.0;
    double beta1 = 16.0;
    double beta2 = 1.0;
    double L = 0.0;  // 0: 4 sqrt(max beta * T)
    double T = 1.0;

    double window() const;
};

struct InterfaceValues {
    double u_minus = 0.0;  // u1(0-)
    double u_plus = 0.0;   // u2(0+)
    double Phi = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

InterfaceValues explicit_interface_values(const TwoPhaseSpec& spec);

struct OneDSolution {
    TwoPhaseSpec spec;
    double h = 0.0;
    double dt = 0.0;
    std::vector<double> x;
    std::vector<double> times;       // every step, starting at 0
    std::vector<double> u_minus;     // v(0) / beta1
    std::vector<double> u_plus;      // v(0) / beta2
    std::vector<double> flux_minus;  // beta1 u1_x(0-), second-order one-sided difference
    std::vector<double> mass;
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> u;  // nodal u at snapshot times; the interface node holds its cell density
};

// Backward Euler in v = beta u; the interface node stores (1/beta1 + 1/beta2)/2.
OneDSolution solve_two_phase_1d(const TwoPhaseSpec& spec, double h, double dt, int store_every = 0);

// (2/sqrt(pi)) int_0^t beta1 u1_x(0-, tau) / sqrt(t - tau) dtau - phi1(t)/sqrt(beta1) per step,
// phi1(t) = 2 beta1 (u1(0-, t) - alpha) from the jump relation. The flux is taken
// piecewise constant on each step (the backward-Euler flux) and integrated exactly
// against the kernel. The value at t = 0 is 0 by convention.
std::vector<double> abel_identity_residual(const OneDSolution& sol);

struct BlowupOptions {
    double h = 1.0 / 4096.0;
    double dt = 1.0 / 16384.0;  // stage-1 step; later stages scale it with spacing^2
    double L = 2.0;
    // Candidate x_{j+1} lie on x_j + k d_{j+1}, k >= 1, with d_1 = first_spacing and
    // d_{j+1} = d_j / shrink (never below two grid steps).
    double first_spacing = 0.125;
    double shrink = 8.0;
    // A stage ends once u exceeds margin * 2^(j+1) alpha; the recorded peak is
    // checked against the plain threshold.
    double margin = 1.5;
};

struct BlowupStage {
    int j = 0;
    double x = 0.0;
    double t = 0.0;
    double peak = 0.0;       // u(x_j, t_j-)
    double threshold = 0.0;  // 2^j alpha
    double v_max = 0.0;      // max |v| over the stage
    double l1 = 0.0;         // int |u| at the stage end
    bool reached = false;
};

struct BlowupResult {
    double alpha = 1.0;
    std::vector<BlowupStage> stages;  // stage 0 is (0, 0)
    double l1_initial = 0.0;
    double max_l1_drift = 0.0;  // relative, over all steps
    std::vector<double> x;
    std::vector<std::vector<double>> snapshots;  // u at each stage boundary (after reaching it, before the switch)
};

// Builds (x_j, t_j) stage by stage: evolve with beta = 16 left of x_j (inclusive)
// and 1 to the right, stop at the first step where a search-lattice node x in
// (x_j, x_j + 2^-(j+1)) carries u > margin * 2^(j+1) alpha (earliest time, then
// smallest x), with t < t_j + 2^-(j+1). At a switch u is carried and v recomputed.
// The shrinking lattice keeps the next candidate close enough to x_j that the
// signal reaches it before the new beta = 16 slab relaxes.
BlowupResult run_blowup(double alpha, int j_max, const BlowupOptions& opt = {});

} // namespace fplab
