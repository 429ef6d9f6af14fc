#include "fplab/pde_core.hpp"
#include "fplab/errors.hpp"

#include <cmath>
#include <string>

namespace fplab {

namespace {

// out = -Delta_h w, optionally multiplied by the trapezoid weights.
void laplace_kernel(const Grid& g, std::span<const double> w, std::span<double> out, bool weighted)
{
    require(w.size() == g.size() && out.size() == g.size(), "field size does not match grid");
    const int dim = g.dim();
    const int n0 = g.nodes(0), n1 = g.nodes(1), n2 = g.nodes(2);
    const std::size_t s1 = static_cast<std::size_t>(n0);
    const std::size_t s2 = s1 * static_cast<std::size_t>(n1);
    const double ih2 = 1.0 / (g.h() * g.h());
    const double* W = g.weights().data();
    for (int k = 0; k < n2; ++k) {
        for (int j = 0; j < n1; ++j) {
            const std::size_t row = static_cast<std::size_t>(k) * s2 + static_cast<std::size_t>(j) * s1;
            const double* wj = w.data() + row;
            // neighbour rows along axes 1 and 2 with mirrored ghosts
            const double* jm = nullptr;
            const double* jp = nullptr;
            const double* km = nullptr;
            const double* kp = nullptr;
            if (dim >= 2) {
                jm = wj + (j == 0 ? s1 : -static_cast<std::ptrdiff_t>(s1));
                jp = wj + (j == n1 - 1 ? -static_cast<std::ptrdiff_t>(s1) : static_cast<std::ptrdiff_t>(s1));
            }
            if (dim >= 3) {
                km = wj + (k == 0 ? s2 : -static_cast<std::ptrdiff_t>(s2));
                kp = wj + (k == n2 - 1 ? -static_cast<std::ptrdiff_t>(s2) : static_cast<std::ptrdiff_t>(s2));
            }
            for (int i = 0; i < n0; ++i) {
                const double c = wj[i];
                const double l = i == 0 ? wj[1] : wj[i - 1];
                const double r = i == n0 - 1 ? wj[n0 - 2] : wj[i + 1];
                double acc = 2.0 * c - l - r;
                if (dim >= 2) acc += 2.0 * c - jm[i] - jp[i];
                if (dim >= 3) acc += 2.0 * c - km[i] - kp[i];
                acc *= ih2;
                out[row + i] = weighted ? W[row + i] * acc : acc;
            }
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

void apply_neg_laplacian(const Grid& grid, std::span<const double> w, std::span<double> out)
{
    laplace_kernel(grid, w, out, false);
}

void apply_stiffness(const Grid& grid, std::span<const double> w, std::span<double> out)
{
    laplace_kernel(grid, w, out, true);
}

double dirichlet_energy(const Grid& grid, std::span<const double> w)
{
    std::vector<double> aw(grid.size());
    apply_stiffness(grid, w, aw);
    return dot(w, aw);
}

double weighted_sum(const Grid& grid, std::span<const double> w)
{
    double s = 0.0;
    const auto& W = grid.weights();
    for (std::size_t i = 0; i < w.size(); ++i) s += W[i] * w[i];
    return s;
}

double weighted_dot(const Grid& grid, std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    const auto& W = grid.weights();
    for (std::size_t i = 0; i < a.size(); ++i) s += W[i] * a[i] * b[i];
    return s;
}

double weighted_l1(const Grid& grid, std::span<const double> w)
{
    double s = 0.0;
    const auto& W = grid.weights();
    for (std::size_t i = 0; i < w.size(); ++i) s += W[i] * std::abs(w[i]);
    return s;
}

double weighted_l2(const Grid& grid, std::span<const double> w) { return std::sqrt(weighted_dot(grid, w, w)); }

void apply_system(const SpdSystem& sys, std::span<const double> x, std::span<double> y)
{
    const Grid& g = *sys.grid;
    const std::size_t n = g.size();
    if (sys.pinned.empty()) {
        apply_stiffness(g, x, y);
    } else {
        std::vector<double> xf(x.begin(), x.end());
        for (std::size_t i = 0; i < n; ++i)
            if (sys.pinned[i]) xf[i] = 0.0;
        apply_stiffness(g, xf, y);
    }
    if (!sys.shift.empty())
        for (std::size_t i = 0; i < n; ++i) y[i] += sys.shift[i] * x[i];
    if (!sys.pinned.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (sys.pinned[i]) y[i] = x[i];
}

CgResult conjugate_gradient(const SpdSystem& sys, std::span<const double> rhs, std::span<double> x,
                            const CgOptions& opt)
{
    require(sys.grid != nullptr, "linear system has no grid");
    const Grid& g = *sys.grid;
    const std::size_t n = g.size();
    require(rhs.size() == n && x.size() == n, "vector size does not match grid");
    require(sys.shift.empty() || sys.shift.size() == n, "shift size does not match grid");
    require(sys.pinned.empty() || sys.pinned.size() == n, "pin mask size does not match grid");

    bool any_shift = false;
    for (double s : sys.shift) {
        require(s >= 0.0, "negative diagonal shift");
        if (s > 0.0) any_shift = true;
    }
    bool any_pin = false;
    for (auto p : sys.pinned) any_pin = any_pin || p;
    if (!any_shift && !any_pin) throw ValidationError("singular system: pure Neumann operator with zero shift");

    int cap = opt.max_iter;
    if (cap <= 0) {
        int per_axis = 0;
        for (int a = 0; a < g.dim(); ++a) per_axis = std::max(per_axis, g.nodes(a));
        cap = 20 * per_axis * per_axis;
    }

    std::vector<double> inv_diag;
    if (opt.jacobi) {
        inv_diag.assign(n, 1.0);
        const double stencil = 2.0 * g.dim() / (g.h() * g.h());
        for (std::size_t i = 0; i < n; ++i) {
            if (!sys.pinned.empty() && sys.pinned[i]) continue;
            double d = g.weight(i) * stencil;
            if (!sys.shift.empty()) d += sys.shift[i];
            inv_diag[i] = 1.0 / d;
        }
    }

    std::vector<double> r(n), z, p(n), q(n);
    if (!sys.pinned.empty())
        for (std::size_t i = 0; i < n; ++i)
            if (sys.pinned[i]) x[i] = rhs[i];
    apply_system(sys, x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];

    const double bnorm = std::sqrt(dot(rhs, rhs));
    CgResult res;
    if (bnorm == 0.0) {
        for (std::size_t i = 0; i < n; ++i) x[i] = 0.0;
        return res;
    }
    double rnorm = std::sqrt(dot(r, r));
    if (rnorm <= opt.tol * bnorm) {
        res.residual = rnorm / bnorm;
        return res;
    }
    if (opt.jacobi) {
        z.resize(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    }
    const std::vector<double>& zr = opt.jacobi ? z : r;
    p = zr;
    double rz = dot(r, zr);
    for (int it = 1; it <= cap; ++it) {
        apply_system(sys, p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) throw SolverError("conjugate gradient breakdown (operator not positive definite)");
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rnorm = std::sqrt(dot(r, r));
        if (rnorm <= opt.tol * bnorm) {
            res.iterations = it;
            res.residual = rnorm / bnorm;
            return res;
        }
        if (opt.jacobi)
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, zr);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = zr[i] + beta * p[i];
    }
    throw SolverError("conjugate gradient did not converge in " + std::to_string(cap) +
                      " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")");
}

std::vector<double> solve_shifted(const Grid& grid, double s, std::span<const double> rhs, const CgOptions& opt,
                                  CgResult* info)
{
    require(s >= 0.0, "shift must be non-negative");
    SpdSystem sys;
    sys.grid = &grid;
    sys.shift.resize(grid.size());
    std::vector<double> b(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sys.shift[i] = s * grid.weight(i);
        b[i] = grid.weight(i) * rhs[i];
    }
    std::vector<double> x(grid.size(), 0.0);
    const CgResult r = conjugate_gradient(sys, b, x, opt);
    if (info) *info = r;
    return x;
}

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> sup, std::span<const double> rhs)
{
    const std::size_t n = diag.size();
    require(n > 0 && sub.size() == n && sup.size() == n && rhs.size() == n, "tridiagonal sizes differ");
    std::vector<double> c(n), d(n), x(n);
    double m = diag[0];
    if (m == 0.0) throw SolverError("tridiagonal solve hit a zero pivot");
    c[0] = sup[0] / m;
    d[0] = rhs[0] / m;
    for (std::size_t i = 1; i < n; ++i) {
        m = diag[i] - sub[i] * c[i - 1];
        if (m == 0.0) throw SolverError("tridiagonal solve hit a zero pivot");
        c[i] = i + 1 < n ? sup[i] / m : 0.0;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

} // namespace fplab
