#include "doctest.h"

#include "fplab/cell.hpp"
#include "fplab/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

using namespace fplab;

TEST_CASE("the 1/R model is exact on model data")
{
    std::vector<std::pair<double, double>> pts{{2.0, 1.0 - 0.3 / 2.0}, {4.0, 1.0 - 0.3 / 4.0}, {8.0, 1.0 - 0.3 / 8.0}};
    const auto fit = extrapolate_capacity(pts);
    CHECK(fit.theta == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fit.slope == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(fit.error_estimate < 1e-13);

    std::vector<std::pair<double, double>> flat{{2.0, 3.0}, {4.0, 3.0}, {8.0, 3.0}};
    const auto c = extrapolate_capacity(flat);
    CHECK(c.theta == doctest::Approx(3.0));
    CHECK(c.error_estimate == doctest::Approx(0.0));
}

TEST_CASE("extrapolation rejects short and non-monotone sequences")
{
    std::vector<std::pair<double, double>> two{{2.0, 1.0}, {4.0, 0.9}};
    CHECK_THROWS_AS(extrapolate_capacity(two), ValidationError);
    std::vector<std::pair<double, double>> zigzag{{2.0, 1.0}, {4.0, 0.9}, {8.0, 0.95}};
    CHECK_THROWS_AS(extrapolate_capacity(zigzag), ValidationError);
}

TEST_CASE("radial oracle approaches 4 pi rho")
{
    const double radii[] = {2.0, 4.0, 8.0};
    const auto fit = radial_capacity_limit(0.25, radii, 400);
    CHECK(fit.theta == doctest::Approx(std::numbers::pi).epsilon(0.01));
    // finite-R capacity of concentric spheres: 4 pi rho R / (R - rho)
    CHECK(radial_capacity(0.25, 2.0, 4000) == doctest::Approx(4.0 * std::numbers::pi * 0.25 * 2.0 / 1.75).epsilon(1e-6));
}

TEST_CASE("truncated capacity decreases with R and satisfies the maximum principle")
{
    const Ball B{0.25};
    const auto r1 = solve_capacitary(B, 1.0, 1.0 / 16.0);
    const auto r2 = solve_capacitary(B, 2.0, 1.0 / 16.0);
    CHECK(r1.octant);
    CHECK(r2.theta_R < r1.theta_R);
    CHECK(r2.theta_R > std::numbers::pi * 0.95);
    for (double th : r1.potential) {
        CHECK(th >= -1e-12);
        CHECK(th <= 1.0 + 1e-12);
    }
}

TEST_CASE("capacity scales linearly with the ball radius")
{
    // the discrete problem at (2 rho, 2 R, 2 h) is the one at (rho, R, h) scaled
    const auto a = solve_capacitary(Ball{0.25}, 1.0, 1.0 / 16.0);
    const auto b = solve_capacitary(Ball{0.5}, 2.0, 1.0 / 8.0);
    CHECK(b.theta_R == doctest::Approx(2.0 * a.theta_R).epsilon(1e-8));
}

TEST_CASE("capacity is monotone under inclusion of sets")
{
    const auto small = solve_capacitary(Ball{0.2}, 2.0, 1.0 / 20.0);
    const auto large = solve_capacitary(Ball{0.25}, 2.0, 1.0 / 20.0);
    CHECK(small.theta_R < large.theta_R);
    const auto box = solve_capacitary(AxisBox{{0.25, 0.25, 0.25}}, 2.0, 1.0 / 20.0);
    CHECK(box.theta_R > large.theta_R);
}

TEST_CASE("the staircase potential minimises the discrete Dirichlet energy")
{
    const auto r = solve_capacitary(Ball{0.25}, 1.0, 1.0 / 12.0, {}, CellBoundary::Staircase);
    const double e0 = dirichlet_energy(r.grid, r.potential);
    CHECK(8.0 * e0 == doctest::Approx(r.theta_R));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1e-3, 1e-3);
    for (int trial = 0; trial < 5; ++trial) {
        auto p = r.potential;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!r.pinned[i]) p[i] += U(rng);
        CHECK(dirichlet_energy(r.grid, p) >= e0);
    }
}

TEST_CASE("capacitary problem validates resolution and truncation")
{
    CHECK_THROWS_AS(solve_capacitary(Ball{0.01}, 1.0, 1.0 / 16.0), ValidationError);
    CHECK_THROWS_AS(solve_capacitary(Ball{0.25}, 0.5, 1.0 / 16.0), ValidationError);
}

TEST_CASE("strange-term coefficient exists only in the critical regime")
{
    const auto crit = classify_regime(1.0, 2.0, 3);
    CHECK(strange_term_coefficient(crit, std::numbers::pi) == doctest::Approx(std::numbers::pi));
    const auto crit4 = classify_regime(4.0, 2.0, 3);
    CHECK(strange_term_coefficient(crit4, 1.0) == doctest::Approx(4.0 * strange_term_coefficient(crit, 1.0)));
    CHECK_THROWS_AS(strange_term_coefficient(classify_regime(1.0, 4.0, 3), 1.0), ValidationError);
    CHECK(lattice_node_capacity(0.1) == doctest::Approx(0.1 / kLatticeGreenOrigin3d));
}
