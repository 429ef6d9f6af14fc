#include "fplab/homogenized.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fplab {

std::string variant_name(HomogenizedVariant v)
{
    switch (v) {
    case HomogenizedVariant::PD: return "PD";
    case HomogenizedVariant::DMD: return "DMD";
    case HomogenizedVariant::AD: return "AD";
    case HomogenizedVariant::PDDelta: return "PD_delta";
    }
    return "?";
}

HomogenizedVariant parse_variant(const std::string& s)
{
    if (s == "PD") return HomogenizedVariant::PD;
    if (s == "DMD") return HomogenizedVariant::DMD;
    if (s == "AD") return HomogenizedVariant::AD;
    if (s == "PD_delta") return HomogenizedVariant::PDDelta;
    throw ValidationError("unknown homogenized variant '" + s + "'");
}

namespace {

HomogenizedSolution march(const HomogenizedProblem& p, double capacitary)
{
    const Grid& g = p.grid;
    const std::size_t n = g.size();
    require(p.mean.size() == n && p.initial.size() == n, "homogenized problem size mismatch");
    for (double m : p.mean) require(m > 0.0 && std::isfinite(m), "effective mean must be positive");

    HomogenizedSolution res;
    res.solution.grid = g;
    res.solution.regime = variant_name(p.variant);
    const int every = p.store_every > 0 ? p.store_every : default_store_every(p.time.steps);

    MarchSpec ms;
    ms.grid = &g;
    ms.storage = p.mean;
    ms.v0.resize(n);
    for (std::size_t i = 0; i < n; ++i) ms.v0[i] = p.initial[i] / p.mean[i];
    if (capacitary > 0.0) {
        ms.sink.resize(n);
        res.lambda.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            ms.sink[i] = g.weight(i) * capacitary;
            res.lambda[i] = capacitary / p.mean[i];
        }
    }
    ms.source = p.source;
    ms.time = p.time;
    ms.cg = p.cg;

    std::vector<double> u(n), av(n), running(n, 0.0), prev_u(n);
    double grad_cum = 0.0, prev_t = 0.0;
    const double dt = p.time.dt();
    ms.on_step = [&](int step, double t, std::span<const double> v) {
        for (std::size_t i = 0; i < n; ++i) u[i] = p.mean[i] * v[i];
        if (step > 0) {
            apply_stiffness(g, v, av);
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) e += v[i] * av[i];
            grad_cum += dt * e;
            for (std::size_t i = 0; i < n; ++i) running[i] += 0.5 * (t - prev_t) * (u[i] + prev_u[i]);
        }
        prev_u = u;
        prev_t = t;
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
            if (!res.lambda.empty()) {
                std::vector<double> m(n);
                for (std::size_t i = 0; i < n; ++i) m[i] = u[i] + res.lambda[i] * running[i];
                res.m0.push_back(std::move(m));
            }
        }
    };
    res.stats = march_backward_euler(ms);
    return res;
}

} // namespace

HomogenizedSolution solve_pd(const HomogenizedProblem& p)
{
    require(p.variant == HomogenizedVariant::PD || p.variant == HomogenizedVariant::PDDelta,
            "solve_pd needs variant PD or PD_delta");
    require(p.capacitary == 0.0, "PD carries no capacitary term");
    return march(p, 0.0);
}

HomogenizedSolution solve_dmd(const HomogenizedProblem& p)
{
    require(p.variant == HomogenizedVariant::DMD, "solve_dmd needs variant DMD");
    require(p.capacitary > 0.0 && std::isfinite(p.capacitary), "DMD needs a positive k^2 Theta");
    return march(p, p.capacitary);
}

HomogenizedSolution solve_homogenized(const HomogenizedProblem& p)
{
    switch (p.variant) {
    case HomogenizedVariant::PD:
    case HomogenizedVariant::PDDelta: return solve_pd(p);
    case HomogenizedVariant::DMD: return solve_dmd(p);
    case HomogenizedVariant::AD: {
        HomogenizedSolution res;
        res.solution = solve_ad(p);
        return res;
    }
    }
    throw ValidationError("unknown homogenized variant");
}

std::vector<double> ad_solution(const std::vector<double>& initial, const Source& source, double t,
                                const TimeGrid& time)
{
    require(t >= 0.0, "time must be nonnegative");
    std::vector<double> F = initial;
    if (source.zero() || t == 0.0) return F;
    const double dt = time.dt();
    const int full = static_cast<int>(std::floor(t / dt + 1e-9));
    // trapezoid on the time grid, plus a partial last panel when t is off-grid
    for (std::size_t i = 0; i < F.size(); ++i) {
        double s = 0.0;
        for (int m = 0; m < full; ++m) s += 0.5 * dt * (source.at(i, time.t(m)) + source.at(i, time.t(m + 1)));
        const double t_full = full * dt;
        if (t - t_full > 1e-12 * dt) s += 0.5 * (t - t_full) * (source.at(i, t_full) + source.at(i, t));
        F[i] += s;
    }
    return F;
}

SolutionField solve_ad(const HomogenizedProblem& p)
{
    require(p.variant == HomogenizedVariant::AD, "solve_ad needs variant AD");
    const std::size_t n = p.grid.size();
    require(p.initial.size() == n, "initial data size mismatch");
    for (const auto& term : p.source.terms) require(term.space.size() == n, "source size mismatch");
    SolutionField s;
    s.grid = p.grid;
    s.regime = "AD";
    const int every = p.store_every > 0 ? p.store_every : default_store_every(p.time.steps);
    // running trapezoid; identical to ad_solution on grid times
    std::vector<double> F = p.initial;
    for (int m = 0; m <= p.time.steps; ++m) {
        const double t = p.time.t(m);
        if (m > 0) {
            const double t0 = p.time.t(m - 1);
            for (std::size_t i = 0; i < n; ++i)
                F[i] += 0.5 * (t - t0) * (p.source.at(i, t0) + p.source.at(i, t));
        }
        if (m % every == 0 || m == p.time.steps) {
            s.times.push_back(t);
            s.steps.push_back(m);
            s.u.push_back(F);
            s.v.push_back(F);
        }
    }
    return s;
}

std::vector<double> limiting_measure_density(const SolutionField& u0, const std::vector<double>& lambda, double t)
{
    require(!u0.times.empty(), "solution holds no frames");
    const std::size_t n = u0.u.front().size();
    require(lambda.size() == n, "lambda size mismatch");
    const std::size_t k = u0.frame_at(t);
    std::vector<double> integral(n, 0.0);
    for (std::size_t j = 1; j <= k; ++j) {
        const double dt = u0.times[j] - u0.times[j - 1];
        for (std::size_t i = 0; i < n; ++i) integral[i] += 0.5 * dt * (u0.u[j][i] + u0.u[j - 1][i]);
    }
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = u0.u[k][i] + lambda[i] * integral[i];
    return m;
}

} // namespace fplab
