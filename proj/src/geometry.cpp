#include "fplab/geometry.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fplab {

long integer_part(double r) { return static_cast<long>(std::floor(r + 0.5)); }

double fractional_part(double r) { return r - static_cast<double>(integer_part(r)); }

namespace {
// Snap lattice coordinates that sit on a cell face up to rounding noise.
double snapped(double r)
{
    const double half = std::round(2.0 * r) / 2.0;
    return std::abs(r - half) < 1e-10 ? half : r;
}
} // namespace

CellIndex Lattice::cell_of(const Point& x) const
{
    CellIndex xi{0, 0, 0};
    for (int a = 0; a < dim; ++a) xi[a] = integer_part(snapped((x[a] - origin[a]) / eps));
    return xi;
}

Point Lattice::centre(const CellIndex& xi) const
{
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) c[a] = origin[a] + eps * static_cast<double>(xi[a]);
    return c;
}

Point Lattice::reduced(const Point& x) const
{
    Point y{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) y[a] = fractional_part(snapped((x[a] - origin[a]) / eps));
    return y;
}

Lattice Lattice::flush(const Box& domain, double eps)
{
    Lattice l;
    l.dim = domain.dim;
    l.eps = eps;
    for (int a = 0; a < domain.dim; ++a) l.origin[a] = domain.lo[a] + 0.5 * eps;
    return l;
}

double shape_signed_distance(const Shape& s, const Point& y, int dim)
{
    if (const auto* b = std::get_if<Ball>(&s)) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) r2 += y[a] * y[a];
        return std::sqrt(r2) - b->radius;
    }
    if (const auto* bx = std::get_if<AxisBox>(&s)) {
        double outside = 0.0, inside = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < dim; ++a) {
            const double q = std::abs(y[a]) - bx->half_width[a];
            outside += std::max(q, 0.0) * std::max(q, 0.0);
            inside = std::max(inside, q);
        }
        return std::sqrt(outside) + std::min(inside, 0.0);
    }
    return std::get<ImplicitShape>(s).signed_distance(y);
}

bool shape_contains(const Shape& s, const Point& y, int dim) { return shape_signed_distance(s, y, dim) < 0.0; }

double inscribed_radius(const Shape& s, int dim)
{
    if (const auto* b = std::get_if<Ball>(&s)) return b->radius;
    if (const auto* bx = std::get_if<AxisBox>(&s)) {
        double r = bx->half_width[0];
        for (int a = 1; a < dim; ++a) r = std::min(r, bx->half_width[a]);
        return r;
    }
    return std::get<ImplicitShape>(s).inscribed;
}

double circumscribed_radius(const Shape& s, int dim)
{
    if (const auto* b = std::get_if<Ball>(&s)) return b->radius;
    if (const auto* bx = std::get_if<AxisBox>(&s)) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) r2 += bx->half_width[a] * bx->half_width[a];
        return std::sqrt(r2);
    }
    return std::get<ImplicitShape>(s).circumscribed;
}

double shape_volume(const Shape& s, int dim)
{
    if (const auto* b = std::get_if<Ball>(&s)) {
        const double r = b->radius;
        if (dim == 1) return 2.0 * r;
        if (dim == 2) return std::numbers::pi * r * r;
        return 4.0 / 3.0 * std::numbers::pi * r * r * r;
    }
    if (const auto* bx = std::get_if<AxisBox>(&s)) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= 2.0 * bx->half_width[a];
        return v;
    }
    return std::get<ImplicitShape>(s).volume;
}

bool mirror_symmetric(const Shape& s)
{
    if (const auto* im = std::get_if<ImplicitShape>(&s)) return im->mirror_symmetric;
    return true;
}

std::string shape_name(const Shape& s)
{
    if (std::holds_alternative<Ball>(s)) return "ball";
    if (std::holds_alternative<AxisBox>(s)) return "box";
    return std::get<ImplicitShape>(s).name;
}

std::size_t InclusionGeometry::inclusion_node_count() const
{
    return static_cast<std::size_t>(std::count(inclusion_mask.begin(), inclusion_mask.end(), 1));
}

double InclusionGeometry::depth(const Grid& g, std::size_t node) const
{
    const Point y = lattice.reduced(g.coords(node));
    Point z{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) z[a] = y[a] / eta;
    return -shape_signed_distance(shape, z, g.dim()) * eta * lattice.eps;
}

long CellLayout::cell_along(int axis, long index) const
{
    // floor((rel + m/2) / m)
    const long num = index - origin[axis] + m / 2;
    return num >= 0 ? num / m : -((-num + m - 1) / m);
}

bool CellLayout::contains_cell(const CellIndex& xi) const
{
    for (int a = 0; a < dim; ++a)
        if (xi[a] < lo[a] || xi[a] > hi[a]) return false;
    return true;
}

std::size_t CellLayout::cell_count() const
{
    std::size_t c = 1;
    for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
    return c;
}

CellLayout cell_layout(const Grid& grid, const Lattice& lattice)
{
    const int dim = grid.dim();
    const double h = grid.h();
    require(lattice.dim == dim, "lattice dimension differs from grid dimension");
    require(lattice.eps > 0.0, "eps must be positive");
    CellLayout c;
    c.dim = dim;
    const double mr = lattice.eps / h;
    c.m = std::lround(mr);
    require(std::abs(mr - static_cast<double>(c.m)) < 1e-8 * mr && c.m >= 2 && c.m % 2 == 0,
            "grid misaligned with the lattice: eps/h must be an even integer so that cell centres are grid nodes");
    for (int a = 0; a < dim; ++a) {
        const double oi = (lattice.origin[a] - grid.box().lo[a]) / h;
        c.origin[a] = std::lround(oi);
        require(std::abs(oi - static_cast<double>(c.origin[a])) < 1e-8 * std::max(1.0, std::abs(oi)),
                "lattice origin must lie on a grid node");
    }
    // Xi_eps: cells whose closure lies in the closed domain
    for (int a = 0; a < dim; ++a) {
        const long n = grid.cells(a);
        const long half = c.m / 2;
        c.lo[a] = static_cast<long>(std::ceil(static_cast<double>(half - c.origin[a]) / static_cast<double>(c.m)));
        c.hi[a] = static_cast<long>(std::floor(static_cast<double>(n - c.origin[a] - half) / static_cast<double>(c.m)));
        if (c.hi[a] < c.lo[a]) throw ValidationError("no whole periodicity cell fits in the domain");
    }
    return c;
}

InclusionGeometry build_inclusions(const Grid& grid, double eps, double eta, const Shape& shape,
                                   const ResolutionPolicy& policy)
{
    return build_inclusions(grid, Lattice::flush(grid.box(), eps), eta, shape, policy);
}

InclusionGeometry build_inclusions(const Grid& grid, const Lattice& lattice, double eta, const Shape& shape,
                                   const ResolutionPolicy& policy)
{
    const int dim = grid.dim();
    const double h = grid.h();
    const double eps = lattice.eps;
    require(lattice.dim == dim, "lattice dimension differs from grid dimension");
    require(eps > 0.0 && eta > 0.0, "eps and eta must be positive");
    require(inscribed_radius(shape, dim) > 0.0, "inclusion shape is empty");
    require(eta * circumscribed_radius(shape, dim) < 0.5,
            "inclusion eta*B does not fit strictly inside the unit cell");

    // Everything below runs in integer grid units so that nodes on cell faces
    // are assigned by the half-open convention without rounding noise.
    const CellLayout layout = cell_layout(grid, lattice);
    const long m = layout.m;
    const auto& o = layout.origin;
    const auto& lo = layout.lo;
    const auto& hi = layout.hi;

    InclusionGeometry geo;
    geo.lattice = lattice;
    geo.shape = shape;
    geo.eta = eta;

    for (long k = (dim >= 3 ? lo[2] : 0); k <= (dim >= 3 ? hi[2] : 0); ++k)
        for (long j = (dim >= 2 ? lo[1] : 0); j <= (dim >= 2 ? hi[1] : 0); ++j)
            for (long i = lo[0]; i <= hi[0]; ++i) {
                geo.cells.push_back({i, j, k});
                Index3 c{0, 0, 0};
                c[0] = static_cast<int>(o[0] + m * i);
                if (dim >= 2) c[1] = static_cast<int>(o[1] + m * j);
                if (dim >= 3) c[2] = static_cast<int>(o[2] + m * k);
                geo.centre_nodes.push_back(grid.index(c[0], c[1], c[2]));
            }

    geo.physical_radius = eta * inscribed_radius(shape, dim) * eps;
    geo.point_volume = shape_volume(shape, dim) * std::pow(eta * eps, dim);
    double ref_cap = policy.reference_capacity;
    if (ref_cap <= 0.0 && std::holds_alternative<Ball>(shape) && dim == 3)
        ref_cap = 4.0 * std::numbers::pi * std::get<Ball>(shape).radius;
    if (dim >= 3 && ref_cap > 0.0) geo.point_capacity = ref_cap * std::pow(eta * eps, dim - 2);

    geo.model = InclusionModel::Staircase;
    if (geo.physical_radius < h) {
        const double lattice_green = kLatticeGreenOrigin3d / h;
        if (policy.allow_point_model && dim == 3 && geo.point_capacity > 0.0 &&
            geo.point_capacity * lattice_green < 1.0) {
            geo.model = InclusionModel::Point;
            geo.point_sink = 1.0 / (1.0 / geo.point_capacity - lattice_green);
        } else if (!policy.allow_point_model && geo.physical_radius < policy.min_radius_in_h * h) {
            throw ValidationError("resolution too coarse: inclusion radius " + std::to_string(geo.physical_radius) +
                                  " is below " + std::to_string(policy.min_radius_in_h) + " grid steps");
        }
    }

    const std::size_t n = grid.size();
    geo.inclusion_mask.assign(n, 0);
    geo.in_cells.assign(n, 0);
    for (std::size_t idx = 0; idx < n; ++idx) {
        const Index3 ijk = grid.multi_index(idx);
        bool inside_cells = true;
        Point z{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) {
            const long rel = ijk[a] - o[a];
            const long xi = layout.cell_along(a, ijk[a]);
            if (xi < lo[a] || xi > hi[a]) inside_cells = false;
            z[a] = static_cast<double>(rel - m * xi) / static_cast<double>(m) / eta;
        }
        if (!inside_cells) continue;
        geo.in_cells[idx] = 1;
        if (geo.model == InclusionModel::Staircase && shape_contains(shape, z, dim)) geo.inclusion_mask[idx] = 1;
    }
    if (geo.model == InclusionModel::Staircase)
        for (std::size_t c : geo.centre_nodes)
            if (!geo.inclusion_mask[c]) throw ValidationError("resolution too coarse: an inclusion holds no grid node");

    if (geo.model == InclusionModel::Staircase) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (!geo.inclusion_mask[idx]) continue;
            const Index3 ijk = grid.multi_index(idx);
            for (int a = 0; a < dim; ++a)
                for (int d : {-1, 1}) {
                    Index3 nb = ijk;
                    nb[a] += d;
                    if (nb[a] < 0 || nb[a] > grid.cells(a)) continue;
                    const std::size_t j = grid.index(nb[0], nb[1], nb[2]);
                    if (!geo.inclusion_mask[j]) geo.interface_edges.push_back({idx, j});
                }
        }
    }
    return geo;
}

double ScalingRegime::eta(double eps) const { return p == 0.0 ? c : c * std::pow(eps, p); }

ScalingRegime classify_regime(double c, double p, int dim)
{
    require(c > 0.0, "regime constant c must be positive");
    require(p >= 0.0, "regime exponent p must be non-negative");
    ScalingRegime s;
    s.c = c;
    s.p = p;
    s.dim = dim;
    if (p == 0.0) {
        s.regime = Regime::ConstantEta;
        s.k = std::numeric_limits<double>::infinity();
        return s;
    }
    require(dim >= 3, "small-inclusion scaling regimes are defined for n >= 3 only");
    const double e = p * (0.5 * dim - 1.0);
    if (std::abs(e - 1.0) < 1e-12) {
        s.regime = Regime::Critical;
        s.k = std::pow(c, 0.5 * dim - 1.0);
    } else if (e > 1.0) {
        s.regime = Regime::Subcritical;
        s.k = 0.0;
    } else {
        s.regime = Regime::Supercritical;
        s.k = std::numeric_limits<double>::infinity();
    }
    return s;
}

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
    case Regime::ConstantEta: return "constant_eta";
    }
    return "unknown";
}

Regime parse_regime(const std::string& s)
{
    if (s == "subcritical") return Regime::Subcritical;
    if (s == "critical") return Regime::Critical;
    if (s == "supercritical") return Regime::Supercritical;
    if (s == "constant_eta") return Regime::ConstantEta;
    throw ValidationError("unknown regime '" + s + "'");
}

} // namespace fplab
