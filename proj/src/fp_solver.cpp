#include "fplab/fp_solver.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fplab {

double SourceTerm::factor(double t) const
{
    switch (profile) {
    case Profile::Constant: return 1.0;
    case Profile::Linear: return t;
    case Profile::Sine: return std::sin(rate * t);
    case Profile::Exponential: return std::exp(rate * t);
    }
    return 0.0;
}

double SourceTerm::integral(double t) const
{
    switch (profile) {
    case Profile::Constant: return t;
    case Profile::Linear: return 0.5 * t * t;
    case Profile::Sine: return (1.0 - std::cos(rate * t)) / rate;
    case Profile::Exponential: return rate == 0.0 ? t : std::expm1(rate * t) / rate;
    }
    return 0.0;
}

double Source::at(std::size_t i, double t) const
{
    double f = 0.0;
    for (const auto& term : terms) f += term.space[i] * term.factor(t);
    return f;
}

double Source::integral(std::size_t i, double t) const
{
    double f = 0.0;
    for (const auto& term : terms) f += term.space[i] * term.integral(t);
    return f;
}

double Source::total(const Grid& grid, double t) const
{
    double f = 0.0;
    for (const auto& term : terms) f += weighted_sum(grid, term.space) * term.factor(t);
    return f;
}

Source Source::constant(std::vector<double> g)
{
    Source s;
    s.terms.push_back({SourceTerm::Profile::Constant, 1.0, std::move(g)});
    return s;
}

Source Source::linear(std::vector<double> g)
{
    Source s;
    s.terms.push_back({SourceTerm::Profile::Linear, 1.0, std::move(g)});
    return s;
}

std::size_t SolutionField::frame_at(double t) const
{
    require(!times.empty(), "solution holds no frames");
    std::size_t best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

int default_store_every(int steps) { return std::max(1, steps / 25); }

MarchStats march_backward_euler(const MarchSpec& spec)
{
    require(spec.grid != nullptr, "march has no grid");
    const Grid& g = *spec.grid;
    const std::size_t n = g.size();
    require(spec.time.T > 0.0 && spec.time.steps >= 1, "time horizon and step count must be positive");
    require(spec.storage.size() == n && spec.v0.size() == n, "storage or initial data size mismatch");
    require(spec.sink.empty() || spec.sink.size() == n, "sink size mismatch");
    for (const auto& term : spec.source.terms) require(term.space.size() == n, "source size mismatch");
    for (double s : spec.storage) require(s > 0.0 && std::isfinite(s), "storage coefficient must be positive");

    const double dt = spec.time.dt();
    SpdSystem sys;
    sys.grid = &g;
    sys.pinned = spec.pinned;
    sys.shift.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.shift[i] = g.weight(i) * spec.storage[i] / dt;
        if (!spec.sink.empty()) sys.shift[i] += spec.sink[i];
    }

    std::vector<double> v = spec.v0, rhs(n);
    if (!spec.pinned.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (spec.pinned[i]) v[i] = 0.0;
    if (spec.on_step) spec.on_step(0, 0.0, v);

    MarchStats stats;
    for (int m = 0; m < spec.time.steps; ++m) {
        const double t1 = spec.time.t(m + 1);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = g.weight(i) * (spec.storage[i] * v[i] / dt + spec.source.at(i, t1));
        if (!spec.pinned.empty())
            for (std::size_t i = 0; i < n; ++i)
                if (spec.pinned[i]) rhs[i] = 0.0;
        const CgResult r = conjugate_gradient(sys, rhs, v, spec.cg);
        stats.cg_iterations += r.iterations;
        stats.worst_residual = std::max(stats.worst_residual, r.residual);
        if (spec.on_step) spec.on_step(m + 1, t1, v);
    }
    return stats;
}

FpResult solve_fp(const FpProblem& p)
{
    const Grid& g = p.grid;
    const std::size_t n = g.size();
    require(p.initial.size() == n, "initial data size mismatch");
    require(p.coefficient.reciprocal.size() == n, "coefficient size mismatch");

    FpResult res;
    res.solution.grid = g;
    res.solution.eps = p.eps;
    res.solution.delta = p.coefficient.delta;
    res.solution.eta = p.eta;
    res.solution.regime = p.regime;
    const int every = p.store_every > 0 ? p.store_every : default_store_every(p.time.steps);

    MarchSpec ms;
    ms.grid = &g;
    ms.storage = p.coefficient.reciprocal;
    ms.v0.resize(n);
    for (std::size_t i = 0; i < n; ++i) ms.v0[i] = p.initial[i] / ms.storage[i];
    ms.source = p.source;
    ms.time = p.time;
    ms.cg = p.cg;

    std::vector<double> u(n), av(n);
    double grad_cum = 0.0;
    const double dt = p.time.dt();
    ms.on_step = [&](int step, double t, std::span<const double> v) {
        for (std::size_t i = 0; i < n; ++i) u[i] = ms.storage[i] * v[i];
        if (step > 0) {
            apply_stiffness(g, v, av);
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) e += v[i] * av[i];
            grad_cum += dt * e;
        }
        DiagnosticsRow row;
        row.t = t;
        row.mass = weighted_sum(g, u);
        row.l1 = weighted_l1(g, u);
        const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
        row.min_u = *lo;
        row.max_u = *hi;
        row.energy_grad_cum = grad_cum;
        row.b_u2 = weighted_dot(g, u, v);
        res.diagnostics.push_back(row);
        if (step % every == 0 || step == p.time.steps) {
            res.solution.times.push_back(t);
            res.solution.steps.push_back(step);
            res.solution.u.push_back(u);
            res.solution.v.emplace_back(v.begin(), v.end());
        }
    };
    res.stats = march_backward_euler(ms);
    return res;
}

std::vector<double> mass_balance_residual(const Grid& grid, const std::vector<DiagnosticsRow>& diag,
                                          const Source& source)
{
    std::vector<double> out;
    if (diag.empty()) return out;
    const double m0 = diag.front().mass;
    // right-endpoint rule, the discrete balance of backward Euler with f(t^{m+1})
    double injected = 0.0;
    double prev_t = diag.front().t;
    out.reserve(diag.size());
    for (const auto& row : diag) {
        if (!source.zero() && row.t > prev_t) injected += (row.t - prev_t) * source.total(grid, row.t);
        prev_t = row.t;
        out.push_back(row.mass - m0 - injected);
    }
    return out;
}

EnergyTrace energy_trace(const std::vector<DiagnosticsRow>& diag, double data_norm)
{
    EnergyTrace e;
    e.data_norm = data_norm;
    for (const auto& row : diag) e.sup_b_u2 = std::max(e.sup_b_u2, row.b_u2);
    if (!diag.empty()) e.grad_cum = diag.back().energy_grad_cum;
    return e;
}

} // namespace fplab
