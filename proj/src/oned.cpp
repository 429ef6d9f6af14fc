#include "fplab/oned.hpp"
#include "fplab/errors.hpp"
#include "fplab/pde_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fplab {

double TwoPhaseSpec::window() const
{
    return L > 0.0 ? L : 4.0 * std::sqrt(std::max(beta1, beta2) * T);
}

InterfaceValues explicit_interface_values(const TwoPhaseSpec& s)
{
    require(s.beta1 > 0.0 && s.beta2 > 0.0, "phase diffusivities must be positive");
    InterfaceValues iv;
    const double r1 = std::sqrt(s.beta1), r2 = std::sqrt(s.beta2);
    iv.u_minus = s.alpha * r2 / r1;
    iv.u_plus = s.alpha * r1 / r2;
    iv.Phi = 2.0 * s.alpha * (r2 - r1);
    iv.phi1 = iv.Phi * r1;
    iv.phi2 = iv.Phi * r2;
    return iv;
}

namespace {

// Backward-Euler stepper for storage * dv/dt = v_xx on a uniform 1D grid with
// no-flux ends, weighted form (W storage / dt + A) v = W storage v_old / dt.
class Stepper1d {
public:
    Stepper1d(std::size_t n, double h, double dt) : n_(n), h_(h), dt_(dt), w_(n, h), a_(n), b_(n), c_(n), rhs_(n)
    {
        w_.front() = w_.back() = 0.5 * h;
    }

    void set_storage(const std::vector<double>& storage)
    {
        storage_ = storage;
        const double k = 1.0 / h_;
        for (std::size_t i = 0; i < n_; ++i) {
            const double left = i > 0 ? k : 0.0, right = i + 1 < n_ ? k : 0.0;
            a_[i] = -left;
            c_[i] = -right;
            b_[i] = w_[i] * storage_[i] / dt_ + left + right;
        }
    }

    void step(std::vector<double>& v)
    {
        for (std::size_t i = 0; i < n_; ++i) rhs_[i] = w_[i] * storage_[i] * v[i] / dt_;
        v = solve_tridiagonal(a_, b_, c_, rhs_);
    }

    double weight(std::size_t i) const { return w_[i]; }
    const std::vector<double>& storage() const { return storage_; }

private:
    std::size_t n_;
    double h_, dt_;
    std::vector<double> w_, a_, b_, c_, rhs_, storage_;
};

} // namespace

OneDSolution solve_two_phase_1d(const TwoPhaseSpec& spec, double h, double dt, int store_every)
{
    require(spec.beta1 > 0.0 && spec.beta2 > 0.0, "phase diffusivities must be positive");
    require(h > 0.0 && dt > 0.0 && spec.T > 0.0, "h, dt and T must be positive");
    const double L = spec.window();
    const double cells = L / h;
    require(std::abs(cells - std::round(cells)) < 1e-8 * cells && cells >= 2.0, "the window must be a multiple of h");
    const long half = std::lround(cells);
    const std::size_t n = static_cast<std::size_t>(2 * half + 1);
    const std::size_t mid = static_cast<std::size_t>(half);
    const int steps = static_cast<int>(std::lround(spec.T / dt));
    require(steps >= 1 && std::abs(steps * dt - spec.T) < 1e-9 * spec.T, "T must be a multiple of dt");

    OneDSolution sol;
    sol.spec = spec;
    sol.h = h;
    sol.dt = dt;
    sol.x.resize(n);
    std::vector<double> storage(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        sol.x[i] = -L + static_cast<double>(i) * h;
        storage[i] = i < mid ? 1.0 / spec.beta1 : (i > mid ? 1.0 / spec.beta2 : 0.5 / spec.beta1 + 0.5 / spec.beta2);
        v[i] = spec.alpha / storage[i];
    }
    Stepper1d st(n, h, dt);
    st.set_storage(storage);
    const int every = store_every > 0 ? store_every : std::max(1, steps / 50);

    auto record = [&](int m) {
        const double t = m * dt;
        sol.times.push_back(t);
        sol.u_minus.push_back(v[mid] / spec.beta1);
        sol.u_plus.push_back(v[mid] / spec.beta2);
        sol.flux_minus.push_back((3.0 * v[mid] - 4.0 * v[mid - 1] + v[mid - 2]) / (2.0 * h));
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) mass += st.weight(i) * storage[i] * v[i];
        sol.mass.push_back(mass);
        if (m % every == 0 || m == steps) {
            std::vector<double> u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = storage[i] * v[i];
            sol.snapshot_times.push_back(t);
            sol.u.push_back(std::move(u));
        }
    };
    record(0);
    for (int m = 1; m <= steps; ++m) {
        st.step(v);
        record(m);
    }
    return sol;
}

std::vector<double> abel_identity_residual(const OneDSolution& sol)
{
    const std::size_t M = sol.times.size();
    std::vector<double> res(M, 0.0);
    const double c = 2.0 / std::sqrt(std::numbers::pi);
    const double rb = std::sqrt(sol.spec.beta1);
    for (std::size_t k = 1; k < M; ++k) {
        const double t = sol.times[k];
        double integral = 0.0;
        for (std::size_t m = 1; m <= k; ++m) {
            const double weight = 2.0 * (std::sqrt(t - sol.times[m - 1]) - std::sqrt(t - sol.times[m]));
            integral += sol.flux_minus[m] * weight;
        }
        const double phi1 = 2.0 * sol.spec.beta1 * (sol.u_minus[k] - sol.spec.alpha);
        res[k] = c * integral - phi1 / rb;
    }
    return res;
}

BlowupResult run_blowup(double alpha, int j_max, const BlowupOptions& opt)
{
    require(alpha > 0.0, "alpha must be positive");
    require(j_max >= 1 && j_max <= 4, "j_max must lie in 1..4 at desk scale");
    require(opt.h > 0.0 && opt.dt > 0.0 && opt.L > 1.0 && opt.first_spacing > 0.0 && opt.shrink >= 1.0 &&
                opt.margin >= 1.0,
            "invalid blow-up grid parameters");
    require(opt.first_spacing <= 0.5, "the first search spacing exceeds the stage budget");
    const double L = opt.L, h = opt.h;
    const double cells = L / h;
    require(std::abs(cells - std::round(cells)) < 1e-8 * cells, "the window must be a multiple of h");
    const long half = std::lround(cells);
    const std::size_t n = static_cast<std::size_t>(2 * half + 1);

    BlowupResult res;
    res.alpha = alpha;
    res.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.x[i] = -L + static_cast<double>(i) * h;

    Stepper1d st(n, h, opt.dt);
    double spacing = opt.first_spacing;
    std::vector<double> u(n, alpha), v(n), storage(n);
    auto l1 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += st.weight(i) * std::abs(u[i]);
        return s;
    };
    res.l1_initial = l1();

    BlowupStage s0;
    s0.threshold = alpha;
    s0.peak = alpha;
    s0.reached = true;
    s0.l1 = res.l1_initial;
    res.stages.push_back(s0);

    std::size_t interface = static_cast<std::size_t>(half);  // node of x_0 = 0
    double t = 0.0;
    for (int j = 0; j < j_max; ++j) {
        // coefficient for (t_j, t_{j+1}]: 16 up to and including x_j, 1 beyond
        for (std::size_t i = 0; i < n; ++i)
            storage[i] = i < interface ? 1.0 / 16.0 : (i > interface ? 1.0 : 0.5 / 16.0 + 0.5);
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / storage[i];
        const std::size_t stride = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(spacing / h)));
        const double dt = opt.dt * std::pow(static_cast<double>(stride) * h / opt.first_spacing, 2.0);
        st = Stepper1d(n, h, dt);
        st.set_storage(storage);

        const double budget = std::ldexp(1.0, -(j + 1));
        const double t_limit = t + budget;
        const double x_lo = res.x[interface], x_hi = x_lo + budget;
        const double threshold = std::ldexp(alpha, j + 1);
        BlowupStage stage;
        stage.j = j + 1;
        stage.threshold = threshold;
        stage.x = x_lo;
        double best = -1.0;
        double best_x = x_lo, best_t = t;
        double vmax = 0.0;
        for (double x : v) vmax = std::max(vmax, std::abs(x));
        bool found = false;
        std::size_t hit = interface;
        while (!found) {
            const double t_next = t + dt;
            if (t_next >= t_limit) break;
            st.step(v);
            t = t_next;
            for (std::size_t i = 0; i < n; ++i) {
                u[i] = storage[i] * v[i];
                vmax = std::max(vmax, std::abs(v[i]));
            }
            res.max_l1_drift = std::max(res.max_l1_drift, std::abs(l1() - res.l1_initial) / res.l1_initial);
            for (std::size_t i = interface + stride; i < n && res.x[i] < x_hi; i += stride) {
                if (u[i] > best) {
                    best = u[i];
                    best_x = res.x[i];
                    best_t = t;
                }
                if (u[i] > opt.margin * threshold) {
                    found = true;
                    hit = i;
                    break;
                }
            }
        }
        stage.v_max = vmax;
        stage.l1 = l1();
        if (!found) {
            stage.reached = false;
            stage.peak = best;
            stage.x = best_x;
            stage.t = best_t;
            res.stages.push_back(stage);
            res.snapshots.push_back(u);
            break;
        }
        stage.reached = true;
        stage.peak = u[hit];
        stage.x = res.x[hit];
        stage.t = t;
        res.stages.push_back(stage);
        res.snapshots.push_back(u);
        interface = hit;
        spacing /= opt.shrink;
    }
    return res;
}

} // namespace fplab
