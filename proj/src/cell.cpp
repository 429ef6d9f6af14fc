#include "fplab/cell.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fplab {

namespace {

// Fraction t in (0, 1] along x + t*step at which the signed distance changes sign.
double crossing_fraction(const Shape& B, const Point& x, const Point& step)
{
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Point y{x[0] + mid * step[0], x[1] + mid * step[1], x[2] + mid * step[2]};
        if (shape_signed_distance(B, y, 3) < 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return std::max(0.5 * (lo + hi), 1e-3);
}

struct CutEdge {
    std::size_t node;
    double coupling;  // W_i / h^2
    double fraction;
};

} // namespace

CapacitaryResult solve_capacitary(const Shape& B, double R, double h, const CgOptions& opt, CellBoundary boundary)
{
    require(h > 0.0 && R > 0.0, "radius and spacing must be positive");
    const double rho = circumscribed_radius(B, 3);
    require(R >= 4.0 * rho, "truncation radius must be at least four times the shape radius");
    require(inscribed_radius(B, 3) >= h, "shape B is unresolved: inscribed radius below one grid step");

    const bool octant = mirror_symmetric(B);
    Box box;
    box.dim = 3;
    for (int a = 0; a < 3; ++a) {
        box.lo[a] = octant ? 0.0 : -R;
        box.hi[a] = R;
    }
    const Grid g = Grid::with_spacing(box, h);
    const std::size_t n = g.size();

    SpdSystem sys;
    sys.grid = &g;
    sys.pinned.assign(n, 0);
    std::vector<double> lift(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Index3 ijk = g.multi_index(i);
        bool far = false;
        for (int a = 0; a < 3; ++a) {
            if (ijk[a] == g.cells(a)) far = true;
            if (!octant && ijk[a] == 0) far = true;
        }
        if (far) {
            sys.pinned[i] = 1;
        } else if (shape_contains(B, g.coords(i), 3)) {
            sys.pinned[i] = 1;
            lift[i] = 1.0;
        }
    }
    std::vector<double> rhs(n);
    apply_stiffness(g, lift, rhs);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = sys.pinned[i] ? 0.0 : -rhs[i];

    std::vector<CutEdge> cuts;
    if (boundary == CellBoundary::CutEdge) {
        sys.shift.assign(n, 0.0);
        const double ih2 = 1.0 / (h * h);
        for (std::size_t i = 0; i < n; ++i) {
            if (sys.pinned[i]) continue;
            const Index3 ijk = g.multi_index(i);
            const Point x = g.coords(i);
            for (int a = 0; a < 3; ++a)
                for (int d : {-1, 1}) {
                    Index3 nb = ijk;
                    nb[a] += d;
                    // mirrored ghost across a symmetry plane
                    if (nb[a] < 0) nb[a] = 1;
                    if (nb[a] > g.cells(a)) nb[a] = g.cells(a) - 1;
                    const std::size_t j = g.index(nb[0], nb[1], nb[2]);
                    if (lift[j] != 1.0) continue;
                    Point step{0.0, 0.0, 0.0};
                    step[a] = d * h;
                    const double s = crossing_fraction(B, x, step);
                    const double c = g.weight(i) * ih2;
                    // the lift already contributed c * 1 to the right-hand side
                    sys.shift[i] += c * (1.0 / s - 1.0);
                    rhs[i] += c * (1.0 / s - 1.0);
                    cuts.push_back({i, c, s});
                }
        }
    }

    std::vector<double> y(n, 0.0);
    CgOptions o = opt;
    if (o.max_iter <= 0) o.max_iter = 20 * g.nodes(0) * g.nodes(0);
    const CgResult info = conjugate_gradient(sys, rhs, y, o);
    double cut_energy = 0.0;
    for (const auto& e : cuts) {
        const double yi = y[e.node];
        cut_energy += e.coupling * ((1.0 - yi) * (1.0 - yi) / e.fraction - (1.0 - yi) * (1.0 - yi));
    }
    for (std::size_t i = 0; i < n; ++i) y[i] += lift[i];

    CapacitaryResult res;
    res.R = R;
    res.h = h;
    res.octant = octant;
    res.iterations = info.iterations;
    res.unknowns = n;
    res.theta_R = (dirichlet_energy(g, y) + cut_energy) * (octant ? 8.0 : 1.0);
    res.grid = g;
    res.potential = std::move(y);
    res.pinned = std::move(sys.pinned);
    return res;
}

CapacityFit extrapolate_capacity(std::span<const std::pair<double, double>> samples)
{
    require(samples.size() >= 3, "capacity extrapolation needs at least three radii");
    std::vector<std::pair<double, double>> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i) require(s[i].first > s[i - 1].first, "radii must be distinct");
    bool dec = true, inc = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        dec = dec && s[i].second <= s[i - 1].second;
        inc = inc && s[i].second >= s[i - 1].second;
    }
    if (!dec && !inc) throw ValidationError("truncated capacities are not monotone in R");

    // linear least squares in x = 1/R
    const double m = static_cast<double>(s.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [R, th] : s) {
        const double x = 1.0 / R;
        sx += x;
        sy += th;
        sxx += x * x;
        sxy += x * th;
    }
    const double det = m * sxx - sx * sx;
    CapacityFit fit;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.theta = (sy - fit.slope * sx) / m;
    for (const auto& [R, th] : s)
        fit.error_estimate = std::max(fit.error_estimate, std::abs(th - fit.theta - fit.slope / R));
    return fit;
}

CapacityEstimate estimate_capacity(const Shape& B, std::span<const double> radii, std::span<const double> spacings,
                                   const CgOptions& opt, CellBoundary boundary)
{
    require(!spacings.empty(), "need at least one grid spacing");
    CapacityEstimate est;
    std::vector<double> hs(spacings.begin(), spacings.end());
    std::sort(hs.begin(), hs.end(), std::greater<>());
    for (double h : hs) {
        std::vector<std::pair<double, double>> pts;
        for (double R : radii) {
            est.runs.push_back(solve_capacitary(B, R, h, opt, boundary));
            pts.emplace_back(R, est.runs.back().theta_R);
            if (h != hs.back()) {
                est.runs.back().potential = {};
                est.runs.back().pinned = {};
            }
        }
        est.fits.push_back(extrapolate_capacity(pts));
    }
    const CapacityFit& fine = est.fits.back();
    if (est.fits.size() == 1) {
        est.theta = fine.theta;
        est.error_estimate = fine.error_estimate;
        return est;
    }
    const CapacityFit& coarse = est.fits[est.fits.size() - 2];
    const double h1 = hs[hs.size() - 2], h2 = hs.back();
    const double r2 = (h1 / h2) * (h1 / h2);
    est.theta = (r2 * fine.theta - coarse.theta) / (r2 - 1.0);
    est.error_estimate = std::abs(est.theta - fine.theta) + fine.error_estimate;
    return est;
}

double radial_capacity(double rho, double R, int cells)
{
    require(rho > 0.0 && R > rho && cells >= 2, "invalid radial capacity problem");
    // series resistance of the shells between the conservative nodes
    const double dr = (R - rho) / cells;
    double resistance = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double rm = rho + (i + 0.5) * dr;
        resistance += dr / (rm * rm);
    }
    return 4.0 * std::numbers::pi / resistance;
}

CapacityFit radial_capacity_limit(double rho, std::span<const double> radii, int cells_per_unit)
{
    std::vector<std::pair<double, double>> pts;
    for (double R : radii) {
        const int cells = std::max(2, static_cast<int>(std::lround((R - rho) * cells_per_unit)));
        pts.emplace_back(R, radial_capacity(rho, R, cells));
    }
    return extrapolate_capacity(pts);
}

double strange_term_coefficient(const ScalingRegime& regime, double theta)
{
    if (regime.regime != Regime::Critical)
        throw ValidationError("the capacitary term exists only in the critical regime, not " +
                              regime_name(regime.regime));
    return regime.k * regime.k * theta;
}

} // namespace fplab
