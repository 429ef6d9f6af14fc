#include "fplab/degenerate.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace fplab {

std::vector<double> DegenerateSolution::inner_density(double t) const
{
    std::vector<double> F = initial;
    for (std::size_t i = 0; i < F.size(); ++i) F[i] += source.integral(i, t);
    return F;
}

std::vector<double> cut_edge_sink(const Grid& grid, const InclusionGeometry& geo)
{
    require(geo.model == InclusionModel::Staircase, "cut edges need staircase inclusions");
    const std::size_t n = grid.size();
    const int dim = grid.dim();
    const double h = grid.h();
    const double scale = geo.lattice.eps * geo.eta;
    std::vector<double> sink(n, 0.0);
    for (const auto& [inner, outer] : geo.interface_edges) {
        const Point xo = grid.coords(outer);
        const Point xi = grid.coords(inner);
        const Point c = geo.lattice.centre(geo.lattice.cell_of(xi));
        auto inside = [&](double t) {
            Point z{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) z[a] = (xo[a] + t * (xi[a] - xo[a]) - c[a]) / scale;
            return shape_signed_distance(geo.shape, z, dim) < 0.0;
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (inside(mid) ? hi : lo) = mid;
        }
        const double s = std::max(0.5 * (lo + hi), 1e-3);
        sink[outer] += grid.weight(outer) / (h * h) * (1.0 / s - 1.0);
    }
    return sink;
}

DegenerateSolution solve_degenerate(const DegenerateProblem& p)
{
    const Grid& g = p.grid;
    const std::size_t n = g.size();
    const InclusionGeometry& geo = p.geometry;
    require(p.initial.size() == n, "initial data size mismatch");
    require(geo.inclusion_mask.size() == n, "geometry does not match the grid");
    const std::size_t pinned_count = geo.inclusion_node_count();
    require(pinned_count < n, "empty outer region");
    require(pinned_count > 0 || geo.model == InclusionModel::Point, "degenerate problem needs inclusions");

    const ScaledCoefficientField coef = assemble_coefficient(g, geo, p.coefficient, 1.0);

    DegenerateSolution sol;
    sol.geometry = geo;
    sol.initial = p.initial;
    sol.source = p.source;
    sol.solution.grid = g;
    sol.solution.eps = p.eps;
    sol.solution.delta = 0.0;
    sol.solution.eta = geo.eta;
    sol.solution.regime = p.regime;
    if (geo.model == InclusionModel::Point) {
        sol.sink.assign(n, 0.0);
        for (std::size_t c : geo.centre_nodes) sol.sink[c] = geo.point_sink;
    } else if (p.interface == CellBoundary::CutEdge) {
        sol.sink = cut_edge_sink(g, geo);
    }

    MarchSpec ms;
    ms.grid = &g;
    ms.storage.resize(n);
    ms.v0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ms.storage[i] = 1.0 / coef.b[i];
        ms.v0[i] = geo.inclusion_mask[i] ? 0.0 : coef.b[i] * p.initial[i];
    }
    ms.sink = sol.sink;
    ms.pinned = geo.inclusion_mask;
    ms.source = p.source;
    ms.time = p.time;
    ms.cg = p.cg;
    sol.v0 = ms.v0;

    const int every = p.store_every > 0 ? p.store_every : default_store_every(p.time.steps);
    const double dt = p.time.dt();
    double data_mass0 = weighted_sum(g, p.initial);

    std::vector<double> w(n, 0.0), av(n), u(n);
    double deposited = 0.0;
    ms.on_step = [&](int step, double t, std::span<const double> v) {
        if (step > 0) {
            apply_stiffness(g, v, av);
            double flux = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] += dt * v[i];
                if (geo.inclusion_mask[i]) flux -= av[i];
            }
            if (!sol.sink.empty())
                for (std::size_t i = 0; i < n; ++i) flux += sol.sink[i] * v[i];
            deposited += dt * flux;
        }
        const std::vector<double> F = sol.inner_density(t);
        DegenerateBalanceRow row;
        row.t = t;
        for (std::size_t i = 0; i < n; ++i) {
            if (geo.inclusion_mask[i]) {
                u[i] = F[i];
                row.inner_mass += g.weight(i) * F[i];
            } else {
                u[i] = ms.storage[i] * v[i];
                row.outer_mass += g.weight(i) * u[i];
            }
        }
        row.boundary_measure = deposited;
        row.total = row.outer_mass + row.inner_mass + row.boundary_measure;
        double injected = 0.0;
        for (const auto& term : p.source.terms) injected += weighted_sum(g, term.space) * term.integral(t);
        row.residual = row.total - data_mass0 - injected;
        sol.balance.push_back(row);
        if (step % every == 0 || step == p.time.steps) {
            sol.solution.times.push_back(t);
            sol.solution.steps.push_back(step);
            sol.solution.u.push_back(u);
            sol.solution.v.emplace_back(v.begin(), v.end());
            sol.w_rect.push_back(w);
        }
    };
    sol.stats = march_backward_euler(ms);
    return sol;
}

double surface_flux_measure(const DegenerateSolution& sol, double t, std::span<const double> phi)
{
    const SolutionField& s = sol.solution;
    const Grid& g = s.grid;
    const std::size_t n = g.size();
    require(phi.size() == n, "test function size mismatch");
    const std::size_t k = s.frame_at(t);
    const std::vector<double> F = sol.inner_density(s.times[k]);
    double bulk = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (sol.is_outer(i)) bulk += g.weight(i) * (F[i] - s.u[k][i]) * phi[i];
    std::vector<double> aw(n);
    apply_stiffness(g, sol.w_rect[k], aw);
    double grad = 0.0;
    for (std::size_t i = 0; i < n; ++i) grad += phi[i] * aw[i];
    return bulk - grad;
}

double surface_flux_measure_direct(const DegenerateSolution& sol, double t, std::span<const double> phi)
{
    const SolutionField& s = sol.solution;
    const Grid& g = s.grid;
    const std::size_t n = g.size();
    require(phi.size() == n, "test function size mismatch");
    const std::size_t k = s.frame_at(t);
    // trapezoidal w from the backward-Euler running sum
    const double dt = s.steps[k] > 0 ? s.times[k] / s.steps[k] : 0.0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = sol.w_rect[k][i] + 0.5 * dt * (sol.v0[i] - s.v[k][i]);
    std::vector<double> aw(n);
    apply_stiffness(g, w, aw);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!sol.is_outer(i)) mu -= phi[i] * aw[i];
    // sinks deposit exactly sink * v^{m+1} per step, so they take the rectangle sum
    if (!sol.sink.empty())
        for (std::size_t i = 0; i < n; ++i) mu += sol.sink[i] * sol.w_rect[k][i] * phi[i];
    return mu;
}

std::vector<double> interface_depth(const Grid& grid, const InclusionGeometry& geo)
{
    const std::size_t n = grid.size();
    std::vector<double> depth(n, 0.0);
    if (!std::holds_alternative<ImplicitShape>(geo.shape)) {
        for (std::size_t i = 0; i < n; ++i)
            if (geo.inclusion_mask[i]) depth[i] = geo.depth(grid, i);
        return depth;
    }
    // breadth-first erosion in grid steps from the outer nodes
    std::vector<int> steps(n, -1);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (!geo.inclusion_mask[i]) {
            steps[i] = 0;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const Index3 ijk = grid.multi_index(i);
        for (int a = 0; a < grid.dim(); ++a)
            for (int d : {-1, 1}) {
                Index3 nb = ijk;
                nb[a] += d;
                if (nb[a] < 0 || nb[a] > grid.cells(a)) continue;
                const std::size_t j = grid.index(nb[0], nb[1], nb[2]);
                if (steps[j] >= 0) continue;
                steps[j] = steps[i] + 1;
                queue.push_back(j);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (geo.inclusion_mask[i]) depth[i] = (steps[i] - 0.5) * grid.h();
    return depth;
}

double strip_mass(const SolutionField& fine, const InclusionGeometry& geo, double sigma, std::span<const double> phi,
                  double t)
{
    const Grid& g = fine.grid;
    require(sigma >= 2.0 * g.h(), "strip unresolved: sigma below two grid steps");
    require(phi.size() == g.size(), "test function size mismatch");
    const std::size_t k = fine.frame_at(t);
    const auto depth = interface_depth(g, geo);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (geo.inclusion_mask[i] && depth[i] < sigma) s += g.weight(i) * fine.u[k][i] * phi[i];
    return s;
}

double interior_convergence_error(const SolutionField& fine, const InclusionGeometry& geo, double sigma, double t,
                                  std::span<const double> F)
{
    const Grid& g = fine.grid;
    require(sigma >= 2.0 * g.h(), "strip unresolved: sigma below two grid steps");
    const std::size_t k = fine.frame_at(t);
    const auto depth = interface_depth(g, geo);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (geo.inclusion_mask[i] && depth[i] >= sigma) {
            const double d = fine.u[k][i] - F[i];
            s += g.weight(i) * d * d;
        }
    return std::sqrt(s);
}

std::vector<TestFunction> weak_test_battery(const Grid& grid)
{
    const std::size_t n = grid.size();
    const Box& b = grid.box();
    std::vector<TestFunction> out{{"one", std::vector<double>(n, 1.0)},
                                  {"x1", std::vector<double>(n)},
                                  {"cos_pi_x1", std::vector<double>(n)},
                                  {"cos_pi_x1_cos_pi_x2", std::vector<double>(n)}};
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = grid.coords(i);
        const double s1 = (x[0] - b.lo[0]) / b.side(0);
        const double s2 = b.dim >= 2 ? (x[1] - b.lo[1]) / b.side(1) : 0.0;
        out[1].values[i] = s1;
        out[2].values[i] = std::cos(pi * s1);
        out[3].values[i] = std::cos(pi * s1) * std::cos(pi * s2);
    }
    return out;
}

} // namespace fplab
