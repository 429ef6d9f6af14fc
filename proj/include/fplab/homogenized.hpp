#pragma once

#include "fplab/fp_solver.hpp"
#include "fplab/grid.hpp"

#include <string>
#include <vector>

namespace fplab {

enum class HomogenizedVariant { PD, DMD, AD, PDDelta };

std::string variant_name(HomogenizedVariant v);
HomogenizedVariant parse_variant(const std::string& s);

struct HomogenizedProblem {
    Grid grid;
    HomogenizedVariant variant = HomogenizedVariant::PD;
    std::vector<double> mean;   // M_Y(b^-1) per node, or M_Y(b_delta^-1) for PDDelta
    double capacitary = 0.0;    // k^2 Theta, DMD only
    std::vector<double> initial;
    Source source;
    TimeGrid time;
    int store_every = 0;
    CgOptions cg;
};

struct HomogenizedSolution {
    SolutionField solution;                   // u0 = M v0, v0
    std::vector<DiagnosticsRow> diagnostics;  // per step
    std::vector<std::vector<double>> m0;      // limiting density per frame (DMD only)
    std::vector<double> lambda;               // k^2 Theta / M per node (DMD only)
    MarchStats stats;
};

// PD, PDDelta and DMD share one backward-Euler engine:
//   M dv/dt - Delta v + k^2 Theta v = f,  v(0) = u-bar / M,  u0 = M v.
HomogenizedSolution solve_pd(const HomogenizedProblem& p);
HomogenizedSolution solve_dmd(const HomogenizedProblem& p);
HomogenizedSolution solve_homogenized(const HomogenizedProblem& p);  // dispatch on variant

// AD: F = u-bar + int_0^t f, trapezoidal in time on the given time grid.
std::vector<double> ad_solution(const std::vector<double>& initial, const Source& source, double t,
                                const TimeGrid& time);
SolutionField solve_ad(const HomogenizedProblem& p);

// m0 = u0 + lambda * int_0^t u0 (trapezoid over the stored frames up to t).
std::vector<double> limiting_measure_density(const SolutionField& u0, const std::vector<double>& lambda, double t);

} // namespace fplab
