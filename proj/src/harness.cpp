#include "fplab/harness.hpp"
#include "fplab/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace fplab {

namespace {

std::vector<double> frame_weights(const std::vector<double>& t)
{
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double d = 0.5 * (t[k + 1] - t[k]);
        w[k] += d;
        w[k + 1] += d;
    }
    return w;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string number_key(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double max_abs_diff(const std::array<double, kBatterySize>& a, const std::array<double, kBatterySize>& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < kBatterySize; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double max_abs(const std::array<double, kBatterySize>& a)
{
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// Everything a sweep shares across its rows.
struct SweepSetup {
    Grid grid;
    TimeGrid time;
    ScalingRegime regime;
    std::vector<double> initial;
    Source source;
    std::vector<double> mean;
    double theta = 0.0;
    double k2theta = 0.0;

    explicit SweepSetup(const ScenarioConfig& c)
        : grid(c.grid()), time(c.time()), regime(c.regime()), initial(c.initial.sample(grid)),
          source(c.source.build(grid)), mean(harmonic_mean_field(grid, c.coefficient))
    {
        if (regime.regime == Regime::Critical) {
            theta = configured_capacity(c);
            k2theta = strange_term_coefficient(regime, theta);
        }
    }

    HomogenizedProblem homog(const ScenarioConfig& c, HomogenizedVariant v) const
    {
        HomogenizedProblem p;
        p.grid = grid;
        p.variant = v;
        p.mean = mean;
        p.initial = initial;
        p.source = source;
        p.time = time;
        p.store_every = c.store_every;
        p.cg = c.cg;
        return p;
    }

    ResolutionPolicy policy(const ScenarioConfig& c) const
    {
        ResolutionPolicy p = c.policy();
        if (p.allow_point_model && p.reference_capacity <= 0.0 && !std::holds_alternative<Ball>(c.shape))
            p.reference_capacity = theta > 0.0 ? theta : configured_capacity(c);
        return p;
    }
};

struct Target {
    std::string name;
    SolutionField field;
    std::vector<std::vector<double>> density;  // limiting measure density per frame
    double norm = 0.0;
};

Target make_target(const SweepSetup& s, const ScenarioConfig& c, HomogenizedVariant v, double capacitary = 0.0,
                   std::vector<double> mean = {})
{
    Target t;
    t.name = variant_name(v);
    HomogenizedProblem p = s.homog(c, v);
    if (!mean.empty()) p.mean = std::move(mean);
    if (v == HomogenizedVariant::AD) {
        t.field = solve_ad(p);
        t.density = t.field.u;
    } else {
        p.capacitary = capacitary;
        HomogenizedSolution h = solve_homogenized(p);
        t.field = std::move(h.solution);
        t.density = v == HomogenizedVariant::DMD ? std::move(h.m0) : t.field.u;
    }
    t.norm = l2_time_norm(t.field);
    return t;
}

// Omega^2_eps: staircase inclusion nodes and, for point inclusions, the centre
// node carrying the inclusion storage are excluded.
std::vector<std::uint8_t> outer_mask(const InclusionGeometry& geo)
{
    std::vector<std::uint8_t> m(geo.inclusion_mask.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = geo.inclusion_mask[i] ? 0 : 1;
    if (geo.model == InclusionModel::Point)
        for (std::size_t c : geo.centre_nodes) m[c] = 0;
    return m;
}

} // namespace

double l2_time_distance(const SolutionField& a, const SolutionField& b, std::span<const std::uint8_t> mask)
{
    require(a.times.size() == b.times.size(), "solutions have different frame counts");
    for (std::size_t k = 0; k < a.times.size(); ++k)
        require(std::abs(a.times[k] - b.times[k]) <= 1e-12 * (1.0 + std::abs(a.times[k])), "solutions have different frame times");
    require(a.grid.size() == b.grid.size(), "solutions live on different grids");
    require(mask.empty() || mask.size() == a.grid.size(), "mask size mismatch");
    const auto wt = frame_weights(a.times);
    const Grid& g = a.grid;
    double s = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!mask.empty() && !mask[i]) continue;
            const double e = a.u[k][i] - b.u[k][i];
            d += g.weight(i) * e * e;
        }
        s += wt[k] * d;
    }
    return std::sqrt(s);
}

double l2_time_norm(const SolutionField& a, std::span<const std::uint8_t> mask)
{
    require(mask.empty() || mask.size() == a.grid.size(), "mask size mismatch");
    const auto wt = frame_weights(a.times);
    const Grid& g = a.grid;
    double s = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (mask.empty() || mask[i]) d += g.weight(i) * a.u[k][i] * a.u[k][i];
        s += wt[k] * d;
    }
    return std::sqrt(s);
}

std::array<double, kBatterySize> weak_tests(const Grid& grid, std::span<const double> w)
{
    require(w.size() == grid.size(), "field size does not match the grid");
    const auto battery = weak_test_battery(grid);
    std::array<double, kBatterySize> out{};
    for (std::size_t k = 0; k < kBatterySize; ++k) out[k] = weighted_dot(grid, w, battery[k].values);
    return out;
}

double fit_sink_rate(const std::vector<DegenerateBalanceRow>& rows, std::span<const double> injection_rate, double t0,
                     double t1)
{
    require(injection_rate.empty() || injection_rate.size() == rows.size(), "injection rate length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t m = 1; m < rows.size(); ++m) {
        if (rows[m - 1].t < t0 || rows[m].t > t1) continue;
        const double dt = rows[m].t - rows[m - 1].t;
        const double mass = 0.5 * (rows[m].outer_mass + rows[m - 1].outer_mass);
        const double g = injection_rate.empty() ? 0.0 : 0.5 * (injection_rate[m] + injection_rate[m - 1]);
        const double rate = (rows[m].outer_mass - rows[m - 1].outer_mass) / dt - g;
        num -= rate * mass;
        den += mass * mass;
    }
    if (den <= 0.0) throw SolverError("sink-rate fit has no usable rows");
    return num / den;
}

double log_log_slope(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, "slope fit needs at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "log-log slope needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double det = n * sxx - sx * sx;
    require(det > 0.0, "slope fit needs distinct abscissae");
    return (n * sxy - sx * sy) / det;
}

double configured_capacity(const ScenarioConfig& c)
{
    if (c.cell.theta) return *c.cell.theta;
    CgOptions o;
    o.tol = 1e-10;
    return estimate_capacity(c.shape, c.cell.radii, c.cell.spacings, o, c.cell.boundary).theta;
}

void run_pool(std::size_t count, int workers, const std::function<void(std::size_t)>& job)
{
    std::size_t n = workers > 0 ? static_cast<std::size_t>(workers) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min(n, count);
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex lock;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ConvergenceReport run_scheme_one(const ScenarioConfig& c)
{
    validate(c);
    const SweepSetup s(c);
    const Regime reg = s.regime.regime;
    require(c.box.dim == 3 || reg != Regime::Critical, "critical comparisons need n = 3");

    ConvergenceReport rep;
    rep.scheme = "one";
    rep.regime = regime_name(reg);
    rep.theta = s.theta;
    rep.k2theta = s.k2theta;

    const Target pd = make_target(s, c, HomogenizedVariant::PD);
    Target own;
    if (reg == Regime::Critical)
        own = make_target(s, c, HomogenizedVariant::DMD, s.k2theta);
    else if (reg == Regime::Subcritical)
        own = pd;
    else
        own = make_target(s, c, HomogenizedVariant::AD);
    rep.target = own.name;
    rep.cross_target = reg == Regime::ConstantEta ? "AD" : "PD";
    rep.metric = reg == Regime::ConstantEta ? "weak" : "l2";
    const Target& cross = reg == Regime::ConstantEta ? own : pd;

    const ResolutionPolicy policy = s.policy(c);
    rep.rows.resize(c.eps.size());
    run_pool(c.eps.size(), c.workers, [&](std::size_t idx) {
        const auto t0 = std::chrono::steady_clock::now();
        const double eps = c.eps[idx];
        ConvergenceRow& row = rep.rows[idx];
        row.key = "eps=" + number_key(eps);
        row.parameter = "eps";
        row.eps = eps;
        row.eta = c.eta.eta(eps);
        row.regime = rep.regime;

        DegenerateProblem p;
        p.grid = s.grid;
        p.geometry = build_inclusions(s.grid, eps, row.eta, c.shape, policy);
        p.coefficient = c.coefficient;
        p.initial = s.initial;
        p.source = s.source;
        p.time = s.time;
        p.store_every = c.store_every;
        p.cg = c.cg;
        p.eps = eps;
        p.regime = rep.regime;
        p.interface = c.interface;
        const DegenerateSolution sol = solve_degenerate(p);

        row.l2_gap = l2_time_distance(sol.solution, own.field);
        row.target_norm = own.norm;
        row.outer_norm = l2_time_norm(sol.solution, outer_mask(p.geometry));
        const std::size_t last = sol.solution.frames() - 1;
        const double T = sol.solution.times[last];
        row.weak = weak_tests(s.grid, sol.solution.u[last]);
        row.weak_target = weak_tests(s.grid, own.field.u[last]);
        row.weak_gap = max_abs_diff(row.weak, row.weak_target);

        // total measure: density on both phases plus the interface measure
        const auto battery = weak_test_battery(s.grid);
        std::array<double, kBatterySize> total{}, limit{};
        for (std::size_t k = 0; k < kBatterySize; ++k) {
            total[k] = row.weak[k] + surface_flux_measure(sol, T, battery[k].values);
            limit[k] = weighted_dot(s.grid, own.density[last], battery[k].values);
        }
        row.measure_gap = max_abs_diff(total, limit);
        row.cross_gap = reg == Regime::ConstantEta ? row.measure_gap : l2_time_distance(sol.solution, cross.field);

        std::vector<double> inj(sol.balance.size(), 0.0);
        if (!s.source.zero()) {
            const auto outer = outer_mask(p.geometry);
            for (std::size_t m = 0; m < sol.balance.size(); ++m) {
                double g = 0.0;
                for (std::size_t i = 0; i < s.grid.size(); ++i)
                    if (outer[i]) g += s.grid.weight(i) * s.source.at(i, sol.balance[m].t);
                inj[m] = g;
            }
        }
        double mean_M = 0.0;
        for (double m : s.mean) mean_M += m;
        mean_M /= static_cast<double>(s.mean.size());
        row.fitted_rate = mean_M * fit_sink_rate(sol.balance, inj, 0.25 * c.T, c.T);
        row.runtime = seconds_since(t0);
    });
    check_report(rep);

    std::vector<double> eps, gap;
    for (const auto& r : rep.rows) {
        eps.push_back(r.eps);
        gap.push_back(r.l2_gap / own.norm);
    }
    if (eps.size() >= 2 && std::all_of(gap.begin(), gap.end(), [](double g) { return g > 0.0; }))
        rep.summary["gap_slope"] = log_log_slope(eps, gap);
    rep.summary["target_norm"] = own.norm;
    rep.summary["cross_target_norm"] = reg == Regime::ConstantEta ? max_abs(weak_tests(s.grid, own.density.back()))
                                                                  : cross.norm;
    return rep;
}

ConvergenceReport run_scheme_two(const ScenarioConfig& c)
{
    validate(c);
    require(!c.delta.empty(), "scheme two needs a delta list");
    const SweepSetup s(c);
    const Regime reg = s.regime.regime;
    const bool constant_eta = reg == Regime::ConstantEta;

    ConvergenceReport rep;
    rep.scheme = "two";
    rep.regime = regime_name(reg);
    rep.theta = s.theta;
    rep.k2theta = s.k2theta;
    rep.target = constant_eta ? "PD_delta" : "PD";
    rep.metric = constant_eta ? "weak" : "l2";

    const Target pd = make_target(s, c, HomogenizedVariant::PD);
    const Target ad = make_target(s, c, HomogenizedVariant::AD);
    Target cross;
    if (reg == Regime::Critical) {
        cross = make_target(s, c, HomogenizedVariant::DMD, s.k2theta);
        rep.cross_target = "DMD";
    } else if (reg == Regime::Subcritical) {
        cross = pd;
        rep.cross_target = "PD";
    } else {
        cross = ad;
        rep.cross_target = "AD";
    }
    std::vector<Target> pd_delta;
    if (constant_eta)
        for (double d : c.delta)
            pd_delta.push_back(make_target(s, c, HomogenizedVariant::PDDelta, 0.0,
                                           harmonic_mean_delta_field(s.grid, c.coefficient, d, c.shape, c.eta.value)));

    const ResolutionPolicy policy = s.policy(c);
    const std::size_t ne = c.eps.size(), nd = c.delta.size();
    std::vector<ConvergenceRow> rows(ne * nd);
    std::vector<SolutionField> first(ne);
    auto job = [&](std::size_t id) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t di = id / ne, ei = id % ne;
        const double eps = c.eps[ei], delta = c.delta[di];
        ConvergenceRow& row = rows[id];
        row.key = "delta=" + number_key(delta) + ",eps=" + number_key(eps);
        row.parameter = "eps";
        row.eps = eps;
        row.delta = delta;
        row.eta = c.eta.eta(eps);
        row.regime = rep.regime;

        const InclusionGeometry geo = build_inclusions(s.grid, eps, row.eta, c.shape, policy);
        FpProblem p;
        p.grid = s.grid;
        p.coefficient = assemble_coefficient(s.grid, geo, c.coefficient, delta);
        p.initial = s.initial;
        p.source = s.source;
        p.time = s.time;
        p.store_every = c.store_every;
        p.cg = c.cg;
        p.eps = eps;
        p.eta = row.eta;
        p.regime = rep.regime;
        FpResult res = solve_fp(p);

        const Target& own = constant_eta ? pd_delta[di] : pd;
        const auto omega2 = outer_mask(geo);
        row.l2_gap = l2_time_distance(res.solution, own.field, omega2);
        row.target_norm = own.norm;
        row.outer_norm = l2_time_norm(res.solution, omega2);
        const std::size_t last = res.solution.frames() - 1;
        row.weak = weak_tests(s.grid, res.solution.u[last]);
        row.weak_target = weak_tests(s.grid, own.field.u[last]);
        row.weak_gap = max_abs_diff(row.weak, row.weak_target);
        row.measure_gap = row.weak_gap;
        row.cross_gap = constant_eta ? max_abs_diff(row.weak, weak_tests(s.grid, ad.field.u[last]))
                                     : l2_time_distance(res.solution, cross.field, omega2);
        if (di == 0) {
            res.solution.v.clear();
            first[ei] = std::move(res.solution);
        } else {
            row.delta_spread = l2_time_distance(res.solution, first[ei], omega2);
        }
        row.runtime = seconds_since(t0);
    };
    // the first delta is the reference for delta_spread, so it runs first
    run_pool(ne, c.workers, job);
    run_pool(ne * (nd - 1), c.workers, [&](std::size_t k) { job(ne + k); });
    first.clear();
    rep.rows = std::move(rows);

    if (constant_eta) {
        std::vector<double> ds, v0;
        for (std::size_t di = 0; di < nd; ++di) {
            const Target& t = pd_delta[di];
            ConvergenceRow row;
            row.key = "delta=" + number_key(c.delta[di]);
            row.parameter = "delta";
            row.delta = c.delta[di];
            row.eta = c.eta.value;
            row.regime = rep.regime;
            row.l2_gap = l2_time_distance(t.field, ad.field);
            row.target_norm = ad.norm;
            const std::size_t last = t.field.frames() - 1;
            row.weak = weak_tests(s.grid, t.field.u[last]);
            row.weak_target = weak_tests(s.grid, ad.field.u[last]);
            // sup over the stored frames of the weak gap
            for (std::size_t k = 0; k < t.field.frames(); ++k)
                row.weak_gap = std::max(row.weak_gap, max_abs_diff(weak_tests(s.grid, t.field.u[k]),
                                                                   weak_tests(s.grid, ad.field.u[k])));
            row.measure_gap = row.weak_gap;
            row.cross_gap = row.weak_gap;
            for (const auto& v : t.field.v) row.v0_norm = std::max(row.v0_norm, std::sqrt(weighted_dot(s.grid, v, v)));
            ds.push_back(c.delta[di]);
            v0.push_back(row.v0_norm);
            rep.rows.push_back(row);
        }
        if (nd >= 2) rep.summary["v0_log_slope"] = log_log_slope(ds, v0);
    } else {
        double spread = 0.0;
        for (std::size_t di = 1; di < nd; ++di) spread = std::max(spread, rep.rows[di * ne + ne - 1].delta_spread);
        rep.summary["delta_spread_smallest_eps"] = spread / pd.norm;
    }
    rep.summary["target_norm"] = constant_eta ? pd_delta.back().norm : pd.norm;
    rep.summary["cross_target_norm"] = constant_eta ? max_abs(weak_tests(s.grid, ad.field.u.back())) : cross.norm;
    rep.summary["pd_norm"] = pd.norm;
    check_report(rep);
    return rep;
}

namespace {

std::vector<const ConvergenceRow*> eps_rows(const ConvergenceReport& r, double delta)
{
    std::vector<const ConvergenceRow*> out;
    for (const auto& row : r.rows)
        if (row.parameter == "eps" && row.delta == delta) out.push_back(&row);
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->eps > b->eps; });
    return out;
}

double smallest_delta(const ConvergenceReport& r)
{
    double d = 1e300;
    for (const auto& row : r.rows)
        if (row.parameter == "eps") d = std::min(d, row.delta);
    return d;
}

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return v.size() >= 2;
}

} // namespace

CommutationTable commutation_report(const std::vector<ConvergenceReport>& reports)
{
    std::map<std::string, const ConvergenceReport*> one, two;
    for (const auto& r : reports) {
        auto& slot = r.scheme == "one" ? one : two;
        if (r.scheme != "one" && r.scheme != "two") throw ValidationError("unknown scheme '" + r.scheme + "' in report");
        if (slot.count(r.regime)) throw ValidationError("two scheme-" + r.scheme + " reports for regime " + r.regime);
        slot[r.regime] = &r;
    }
    CommutationTable table;
    for (const char* name : {"subcritical", "critical", "supercritical", "constant_eta"}) {
        if (!one.count(name) || !two.count(name)) continue;
        const ConvergenceReport& a = *one[name];
        const ConvergenceReport& b = *two[name];
        if (a.metric != b.metric) throw ValidationError(std::string("incomparable reports for regime ") + name);
        CommutationRow row;
        row.regime = name;
        row.scheme_one_limit = a.target;
        row.scheme_two_limit = b.regime == "constant_eta" ? "AD" : b.target;
        row.metric = a.metric;
        row.expected = (row.regime == "subcritical" || row.regime == "constant_eta") ? "commute" : "do not commute";
        if (a.cross_target != row.scheme_two_limit)
            throw ValidationError(std::string("scheme-one report for ") + name + " measures against " + a.cross_target +
                                  ", not the scheme-two limit " + row.scheme_two_limit);
        const double scale = a.summary.count("cross_target_norm") ? a.summary.at("cross_target_norm") : 1.0;
        for (const auto* r : eps_rows(a, 0.0)) {
            row.eps.push_back(r->eps);
            row.discrepancy.push_back(r->cross_gap / scale);
        }
        // the sets of eps must match between the schemes
        const double dmin = smallest_delta(b);
        const auto brows = eps_rows(b, dmin);
        if (brows.size() != row.eps.size()) throw ValidationError(std::string("incomparable eps lists for regime ") + name);
        for (std::size_t i = 0; i < brows.size(); ++i)
            if (std::abs(brows[i]->eps - row.eps[i]) > 1e-12) throw ValidationError(std::string("incomparable eps lists for regime ") + name);

        row.monotone = strictly_decreasing(row.discrepancy);
        const bool positive = std::all_of(row.discrepancy.begin(), row.discrepancy.end(), [](double d) { return d > 0.0; });
        row.slope = positive && row.eps.size() >= 2 ? log_log_slope(row.eps, row.discrepancy) : 0.0;
        row.commute = row.monotone && row.slope >= kCommuteMinSlope;

        std::vector<double> own;
        if (b.regime == "constant_eta") {
            for (const auto& r : b.rows)
                if (r.parameter == "delta") own.push_back(r.weak_gap);
        } else {
            for (const auto* r : brows) own.push_back(r->l2_gap);
        }
        row.scheme_two_converges = strictly_decreasing(own);
        if (row.regime == "critical" && !brows.empty()) {
            row.footprint_with = brows.back()->cross_gap / brows.back()->target_norm;
            row.footprint_without = brows.back()->l2_gap / brows.back()->target_norm;
        }
        if (row.regime == "subcritical" && !row.discrepancy.empty()) table.subcritical_level = row.discrepancy.back();
        table.rows.push_back(row);
    }
    return table;
}

std::string commutation_csv(const CommutationTable& t)
{
    CsvTable csv({"regime", "scheme_one_limit", "scheme_two_limit", "metric", "discrepancy_smallest_eps", "slope",
                  "monotone", "scheme_two_converges", "verdict", "expected", "footprint_with", "footprint_without",
                  "subcritical_level"});
    for (const auto& r : t.rows) {
        csv.add(r.regime).add(r.scheme_one_limit).add(r.scheme_two_limit).add(r.metric);
        csv.add(r.discrepancy.empty() ? 0.0 : r.discrepancy.back()).add(r.slope);
        csv.add(r.monotone ? 1 : 0).add(r.scheme_two_converges ? 1 : 0).add(r.verdict()).add(r.expected);
        csv.add(r.footprint_with).add(r.footprint_without).add(t.subcritical_level);
        csv.end_row();
    }
    return csv.text();
}

std::string commutation_json(const CommutationTable& t)
{
    nlohmann::json j;
    j["schema"] = "fplab.commutation.v1";
    j["subcritical_level"] = t.subcritical_level;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows)
        j["rows"].push_back({{"regime", r.regime},
                             {"scheme_one_limit", r.scheme_one_limit},
                             {"scheme_two_limit", r.scheme_two_limit},
                             {"metric", r.metric},
                             {"eps", r.eps},
                             {"discrepancy", r.discrepancy},
                             {"slope", r.slope},
                             {"monotone", r.monotone},
                             {"scheme_two_converges", r.scheme_two_converges},
                             {"verdict", r.verdict()},
                             {"expected", r.expected},
                             {"footprint_with", r.footprint_with},
                             {"footprint_without", r.footprint_without}});
    return j.dump(2);
}

} // namespace fplab
