#pragma once

#include "fplab/report.hpp"
#include "fplab/scenario.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fplab {

// ||a - b||_{L2(Omega x (0, T))}: trapezoid weights in space and over the
// stored frames in time (the frame times must agree). `mask` restricts the
// spatial sum to nodes with mask[i] != 0.
double l2_time_distance(const SolutionField& a, const SolutionField& b, std::span<const std::uint8_t> mask = {});
double l2_time_norm(const SolutionField& a, std::span<const std::uint8_t> mask = {});

// int w phi over the weak test battery.
std::array<double, kBatterySize> weak_tests(const Grid& grid, std::span<const double> w);

// Least-squares kappa in d/dt m = g - kappa m over the rows with t in [t0, t1],
// m the outer (bulk) mass and g the source injected into the outer region.
double fit_sink_rate(const std::vector<DegenerateBalanceRow>& rows, std::span<const double> injection_rate, double t0,
                     double t1);

// Slope of log y against log x by least squares.
double log_log_slope(std::span<const double> x, std::span<const double> y);

// Theta of the configured shape: the config override or the cell module.
double configured_capacity(const ScenarioConfig& c);

// Runs count jobs on at most `workers` threads (0: hardware concurrency);
// rethrows the first failure.
void run_pool(std::size_t count, int workers, const std::function<void(std::size_t)>& job);

// First scheme: delta -> 0, then eps -> 0. One row per eps against the
// regime's target (PD, DMD or AD); cross target PD (AD for constant eta).
ConvergenceReport run_scheme_one(const ScenarioConfig& c);

// Second scheme: fixed delta, eps -> 0. Rows per (delta, eps) against PD
// (eta -> 0) or PD_delta (constant eta); for constant eta also one row per
// delta comparing PD_delta with AD. Fine-scale distances are taken on Omega^2_eps.
ConvergenceReport run_scheme_two(const ScenarioConfig& c);

struct CommutationRow {
    std::string regime;
    std::string scheme_one_limit;
    std::string scheme_two_limit;
    std::string metric;
    std::vector<double> eps;
    std::vector<double> discrepancy;  // scheme-one solutions against the scheme-two limit, relative
    double slope = 0.0;               // log-log slope of the discrepancy in eps
    bool monotone = false;
    bool scheme_two_converges = false;
    bool commute = false;
    std::string expected;  // "commute" / "do not commute" from the regime
    // Critical only: relative gap of the scheme-two solutions to the scheme-one
    // target with and without the capacitary term, at the smallest eps.
    double footprint_with = 0.0;
    double footprint_without = 0.0;

    std::string verdict() const { return commute ? "commute" : "do not commute"; }
};

struct CommutationTable {
    std::vector<CommutationRow> rows;
    double subcritical_level = 0.0;  // subcritical discrepancy at the smallest eps
};

inline constexpr double kCommuteMinSlope = 0.5;

// Pairs scheme-one and scheme-two reports by regime. The scheme-one sequence
// converges to the scheme-two limit when its discrepancy decreases
// monotonically with log-log slope at least kCommuteMinSlope.
CommutationTable commutation_report(const std::vector<ConvergenceReport>& reports);

std::string commutation_csv(const CommutationTable& t);
std::string commutation_json(const CommutationTable& t);

} // namespace fplab
