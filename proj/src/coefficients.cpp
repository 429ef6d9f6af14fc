#include "fplab/coefficients.hpp"
#include "fplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fplab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double macro_by_id(const std::string& id, const Point& x)
{
    if (id == "one") return 1.0;
    if (id == "ramp") return 1.0 + 0.5 * x[0];
    if (id == "wave") return 1.0 + 0.25 * std::cos(std::numbers::pi * x[0]);
    throw ValidationError("unknown macro coefficient profile '" + id + "'");
}

double cell_by_id(const std::string& id, const Point& y, int dim)
{
    if (id == "one") return 1.0;
    if (id == "sine") return 2.0 + std::sin(two_pi * y[0]);
    if (id == "halves") return y[0] < 0.0 ? 1.0 : 4.0;
    if (id == "checker") {
        const double c2 = dim >= 2 ? std::cos(two_pi * y[1]) : 1.0;
        return 1.5 + 0.5 * std::cos(two_pi * y[0]) * c2;
    }
    throw ValidationError("unknown cell coefficient profile '" + id + "'");
}

std::pair<double, double> cell_bounds(const CoefficientSpec& s)
{
    if (s.kind == CoefficientSpec::Kind::Tabulated) {
        const auto [lo, hi] = std::minmax_element(s.table.begin(), s.table.end());
        return {*lo, *hi};
    }
    if (s.p_id == "one") return {1.0, 1.0};
    if (s.p_id == "sine") return {1.0, 3.0};
    if (s.p_id == "halves") return {1.0, 4.0};
    if (s.p_id == "checker") return {1.0, 2.0};
    throw ValidationError("unknown cell coefficient profile '" + s.p_id + "'");
}

double table_lookup(const CoefficientSpec& s, const Point& y, int dim)
{
    const int m = s.table_points;
    std::size_t idx = 0, stride = 1;
    for (int a = 0; a < dim; ++a) {
        // nearest sample of the periodic table on y_k = -1/2 + k/m
        long k = std::lround((y[a] + 0.5) * m);
        k = ((k % m) + m) % m;
        idx += static_cast<std::size_t>(k) * stride;
        stride *= static_cast<std::size_t>(m);
    }
    return s.table[idx];
}

// Midpoint rule over Y of g(y).
template <class G>
double cell_quadrature(int dim, int order, G&& g)
{
    require(order >= 1, "quadrature order must be positive");
    const double w = std::pow(1.0 / order, dim);
    double sum = 0.0;
    const int nk = dim >= 3 ? order : 1, nj = dim >= 2 ? order : 1;
    for (int k = 0; k < nk; ++k)
        for (int j = 0; j < nj; ++j)
            for (int i = 0; i < order; ++i) {
                Point y{-0.5 + (i + 0.5) / order, dim >= 2 ? -0.5 + (j + 0.5) / order : 0.0,
                        dim >= 3 ? -0.5 + (k + 0.5) / order : 0.0};
                sum += g(y);
            }
    return sum * w;
}

bool cell_profile_constant(const CoefficientSpec& s)
{
    return s.kind == CoefficientSpec::Kind::Constant ||
           (s.kind == CoefficientSpec::Kind::Separable && s.p_id == "one");
}

double reciprocal_cell_mean(const CoefficientSpec& s, int dim, int order)
{
    if (s.kind == CoefficientSpec::Kind::Constant) return 1.0 / s.value;
    if (s.kind == CoefficientSpec::Kind::Tabulated) {
        double sum = 0.0;
        for (double v : s.table) sum += 1.0 / v;
        return sum / static_cast<double>(s.table.size());
    }
    return cell_quadrature(dim, order, [&](const Point& y) { return 1.0 / cell_by_id(s.p_id, y, dim); });
}

} // namespace

CoefficientSpec CoefficientSpec::constant(double v)
{
    CoefficientSpec s;
    s.kind = Kind::Constant;
    s.value = v;
    return s;
}

CoefficientSpec CoefficientSpec::separable(std::string a, std::string p)
{
    CoefficientSpec s;
    s.kind = Kind::Separable;
    s.a_id = std::move(a);
    s.p_id = std::move(p);
    return s;
}

std::vector<std::string> macro_profile_ids() { return {"one", "ramp", "wave"}; }
std::vector<std::string> cell_profile_ids() { return {"one", "sine", "halves", "checker"}; }

double macro_factor(const CoefficientSpec& s, const Point& x, int)
{
    if (s.kind == CoefficientSpec::Kind::Constant) return s.value;
    return macro_by_id(s.a_id, x);
}

double cell_factor(const CoefficientSpec& s, const Point& y, int dim)
{
    switch (s.kind) {
    case CoefficientSpec::Kind::Constant: return 1.0;
    case CoefficientSpec::Kind::Separable: return cell_by_id(s.p_id, y, dim);
    case CoefficientSpec::Kind::Tabulated: return table_lookup(s, y, dim);
    }
    return 1.0;
}

double evaluate(const CoefficientSpec& s, const Point& x, const Point& y, int dim)
{
    return macro_factor(s, x, dim) * cell_factor(s, y, dim);
}

void validate(const CoefficientSpec& s, int dim)
{
    switch (s.kind) {
    case CoefficientSpec::Kind::Constant:
        require(s.value > 0.0, "constant coefficient must be positive");
        return;
    case CoefficientSpec::Kind::Separable:
        macro_by_id(s.a_id, Point{0.0, 0.0, 0.0});
        cell_by_id(s.p_id, Point{0.0, 0.0, 0.0}, dim);
        return;
    case CoefficientSpec::Kind::Tabulated: {
        macro_by_id(s.a_id, Point{0.0, 0.0, 0.0});
        require(s.table_points >= 1, "tabulated coefficient needs at least one sample per axis");
        std::size_t expect = 1;
        for (int a = 0; a < dim; ++a) expect *= static_cast<std::size_t>(s.table_points);
        require(s.table.size() == expect, "tabulated coefficient has the wrong number of samples");
        for (double v : s.table) require(v > 0.0, "tabulated coefficient must be positive");
        return;
    }
    }
}

std::pair<double, double> coefficient_bounds(const CoefficientSpec& s, const Box& domain)
{
    validate(s, domain.dim);
    if (s.kind == CoefficientSpec::Kind::Constant) return {s.value, s.value};
    double alo = std::numeric_limits<double>::infinity(), ahi = -alo;
    const int samples = 257;
    for (int i = 0; i < samples; ++i) {
        Point x = domain.lo;
        x[0] = domain.lo[0] + domain.side(0) * i / (samples - 1);
        const double a = macro_by_id(s.a_id, x);
        alo = std::min(alo, a);
        ahi = std::max(ahi, a);
    }
    const auto [plo, phi] = cell_bounds(s);
    return {alo * plo, ahi * phi};
}

ScaledCoefficientField assemble_coefficient(const Grid& grid, const InclusionGeometry& geo,
                                            const CoefficientSpec& spec, double delta)
{
    require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
    const auto [lo, hi] = coefficient_bounds(spec, grid.box());
    require(lo > 0.0, "coefficient b is not bounded away from zero on the domain");
    ScaledCoefficientField f;
    f.delta = delta;
    f.lower_bound = lo;
    const std::size_t n = grid.size();
    f.b.resize(n);
    f.reciprocal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = grid.coords(i);
        double b = evaluate(spec, x, geo.lattice.reduced(x), grid.dim());
        if (geo.inclusion_mask[i]) b *= delta;
        f.b[i] = b;
        f.reciprocal[i] = 1.0 / b;
    }
    if (geo.model == InclusionModel::Point) {
        for (std::size_t c : geo.centre_nodes) {
            const double chi = geo.point_volume / grid.weight(c);
            require(chi < 1.0, "point inclusion larger than its control volume");
            f.reciprocal[c] = (1.0 - chi) / f.b[c] + chi / (delta * f.b[c]);
        }
    }
    return f;
}

ScaledCoefficientField assemble_coefficient(const Grid& grid, const Lattice& lattice, const CoefficientSpec& spec)
{
    const auto [lo, hi] = coefficient_bounds(spec, grid.box());
    require(lo > 0.0, "coefficient b is not bounded away from zero on the domain");
    ScaledCoefficientField f;
    f.lower_bound = lo;
    f.b.resize(grid.size());
    f.reciprocal.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.coords(i);
        f.b[i] = evaluate(spec, x, lattice.reduced(x), grid.dim());
        f.reciprocal[i] = 1.0 / f.b[i];
    }
    return f;
}

double harmonic_cell_mean(const CoefficientSpec& s, const Point& x, int dim, int order)
{
    validate(s, dim);
    if (s.kind == CoefficientSpec::Kind::Constant) return 1.0 / s.value;
    return reciprocal_cell_mean(s, dim, order) / macro_by_id(s.a_id, x);
}

double harmonic_cell_mean_delta(const CoefficientSpec& s, const Point& x, int dim, double delta, const Shape& shape,
                                double eta, int order)
{
    validate(s, dim);
    require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
    require(eta * circumscribed_radius(shape, dim) < 0.5, "inclusion does not fit in the cell");
    const double a = macro_factor(s, x, dim);
    if (cell_profile_constant(s)) {
        const double vol = shape_volume(shape, dim) * std::pow(eta, dim);
        return (vol / delta + 1.0 - vol) / a;
    }
    const double m = cell_quadrature(dim, order, [&](const Point& y) {
        Point z{y[0] / eta, y[1] / eta, y[2] / eta};
        const double inv = 1.0 / cell_factor(s, y, dim);
        return shape_contains(shape, z, dim) ? inv / delta : inv;
    });
    return m / a;
}

std::vector<double> harmonic_mean_field(const Grid& grid, const CoefficientSpec& s, int order)
{
    validate(s, grid.dim());
    const double cell = reciprocal_cell_mean(s, grid.dim(), order);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = s.kind == CoefficientSpec::Kind::Constant ? cell : cell / macro_by_id(s.a_id, grid.coords(i));
    return out;
}

std::vector<double> harmonic_mean_delta_field(const Grid& grid, const CoefficientSpec& s, double delta,
                                              const Shape& shape, double eta, int order)
{
    const Point origin{0.0, 0.0, 0.0};
    // M_delta factorises as (cell integral) / a(x); compute the cell part once.
    CoefficientSpec unit = s;
    if (unit.kind != CoefficientSpec::Kind::Constant) unit.a_id = "one";
    const double cell = harmonic_cell_mean_delta(unit, origin, grid.dim(), delta, shape, eta, order);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = s.kind == CoefficientSpec::Kind::Constant ? cell : cell / macro_by_id(s.a_id, grid.coords(i));
    return out;
}

} // namespace fplab
