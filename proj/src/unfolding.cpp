#include "fplab/unfolding.hpp"
#include "fplab/errors.hpp"

#include <cmath>

namespace fplab {

std::size_t UnfoldedField::micro_count() const
{
    std::size_t c = 1;
    for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(micro);
    return c;
}

Point UnfoldedField::micro_point(std::size_t j) const
{
    Point y{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const long ja = static_cast<long>(j % static_cast<std::size_t>(micro));
        j /= static_cast<std::size_t>(micro);
        y[a] = (static_cast<double>(ja) / static_cast<double>(micro) - 0.5) / eta;
    }
    return y;
}

double UnfoldedField::at(std::size_t node, std::size_t j) const
{
    const long c = node_cell.at(node);
    return c < 0 ? 0.0 : block(static_cast<std::size_t>(c), j);
}

namespace {

std::size_t micro_index(const UnfoldedField& f, const std::array<long, 3>& j)
{
    std::size_t idx = 0;
    for (int a = f.dim - 1; a >= 0; --a) idx = idx * static_cast<std::size_t>(f.micro) + static_cast<std::size_t>(j[a]);
    return idx;
}

std::array<long, 3> micro_multi(const UnfoldedField& f, std::size_t idx)
{
    std::array<long, 3> j{0, 0, 0};
    for (int a = 0; a < f.dim; ++a) {
        j[a] = static_cast<long>(idx % static_cast<std::size_t>(f.micro));
        idx /= static_cast<std::size_t>(f.micro);
    }
    return j;
}

} // namespace

UnfoldedField unfold(const Grid& grid, const Lattice& lattice, std::span<const double> w)
{
    require(w.size() == grid.size(), "field size does not match the grid");
    const CellLayout L = cell_layout(grid, lattice);
    UnfoldedField f;
    f.dim = grid.dim();
    f.micro = L.m;
    f.eps = lattice.eps;
    f.node_cell.assign(grid.size(), -1);

    for (long k = L.lo[2]; k <= L.hi[2]; ++k)
        for (long j = L.lo[1]; j <= L.hi[1]; ++j)
            for (long i = L.lo[0]; i <= L.hi[0]; ++i) f.cells.push_back({i, j, k});
    const std::size_t mc = f.micro_count();
    f.values.assign(f.cells.size() * mc, 0.0);

    for (std::size_t c = 0; c < f.cells.size(); ++c) {
        const CellIndex& xi = f.cells[c];
        std::array<long, 3> start{0, 0, 0};
        for (int a = 0; a < f.dim; ++a) start[a] = L.origin[a] + L.m * xi[a] - L.m / 2;
        for (std::size_t jj = 0; jj < mc; ++jj) {
            const auto j = micro_multi(f, jj);
            const std::size_t node = grid.index(static_cast<int>(start[0] + j[0]), static_cast<int>(start[1] + j[1]),
                                                static_cast<int>(start[2] + j[2]));
            f.block(c, jj) = w[node];
            f.node_cell[node] = static_cast<long>(c);
        }
    }
    return f;
}

std::vector<double> cell_average(const Grid& grid, const Lattice& lattice, std::span<const double> w)
{
    const UnfoldedField f = unfold(grid, lattice, w);
    const std::size_t mc = f.micro_count();
    std::vector<double> mean(f.cells.size(), 0.0);
    for (std::size_t c = 0; c < f.cells.size(); ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < mc; ++j) s += f.block(c, j);
        mean[c] = s / static_cast<double>(mc);
    }
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (f.node_cell[i] >= 0) out[i] = mean[static_cast<std::size_t>(f.node_cell[i])];
    return out;
}

UnfoldedField oscillation(const Grid& grid, const Lattice& lattice, std::span<const double> w)
{
    UnfoldedField f = unfold(grid, lattice, w);
    const std::size_t mc = f.micro_count();
    for (std::size_t c = 0; c < f.cells.size(); ++c) {
        double s = 0.0;
        for (std::size_t j = 0; j < mc; ++j) s += f.block(c, j);
        const double mean = s / static_cast<double>(mc);
        for (std::size_t j = 0; j < mc; ++j) f.block(c, j) -= mean;
    }
    return f;
}

UnfoldedField unfold_small_holes(const Grid& grid, const Lattice& lattice, double eta, std::span<const double> w)
{
    require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
    UnfoldedField f = unfold(grid, lattice, w);
    if (static_cast<double>(f.micro) * eta < 2.0)
        throw ValidationError("unresolved eta: the micro grid has fewer than two samples across eta*Y");
    f.eta = eta;
    return f;
}

UnfoldedField micro_gradient(const UnfoldedField& f, int axis)
{
    require(axis >= 0 && axis < f.dim, "axis out of range");
    UnfoldedField g = f;
    const std::size_t mc = f.micro_count();
    const double dz = f.micro_spacing();
    for (std::size_t c = 0; c < f.cells.size(); ++c)
        for (std::size_t jj = 0; jj < mc; ++jj) {
            auto j = micro_multi(f, jj);
            auto k = j;
            if (j[axis] + 1 < f.micro) {
                k[axis] += 1;
                g.block(c, jj) = (f.block(c, micro_index(f, k)) - f.block(c, jj)) / dz;
            } else {
                k[axis] -= 1;
                g.block(c, jj) = (f.block(c, jj) - f.block(c, micro_index(f, k))) / dz;
            }
        }
    return g;
}

std::vector<double> nodal_gradient(const Grid& grid, std::span<const double> w, int axis)
{
    require(w.size() == grid.size(), "field size does not match the grid");
    require(axis >= 0 && axis < grid.dim(), "axis out of range");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        Index3 ijk = grid.multi_index(i);
        Index3 nb = ijk;
        if (ijk[axis] < grid.cells(axis)) {
            nb[axis] += 1;
            out[i] = (w[grid.index(nb[0], nb[1], nb[2])] - w[i]) / grid.h();
        } else {
            nb[axis] -= 1;
            out[i] = (w[i] - w[grid.index(nb[0], nb[1], nb[2])]) / grid.h();
        }
    }
    return out;
}

namespace {

double unfolded_sum(const UnfoldedField& f, int power)
{
    const double weight = std::pow(f.eps, f.dim) * std::pow(f.micro_spacing(), f.dim);
    double s = 0.0;
    for (double x : f.values) s += power == 1 ? std::abs(x) : x * x;
    return weight * s;
}

double rectangle_sum(const Grid& grid, std::span<const double> w, int power)
{
    require(w.size() == grid.size(), "field size does not match the grid");
    const double cell = std::pow(grid.h(), grid.dim());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Index3 ijk = grid.multi_index(i);
        bool lower = true;
        for (int a = 0; a < grid.dim(); ++a) lower = lower && ijk[a] < grid.cells(a);
        if (lower) s += power == 1 ? std::abs(w[i]) : w[i] * w[i];
    }
    return cell * s;
}

} // namespace

double unfolded_l1(const UnfoldedField& f) { return unfolded_sum(f, 1); }
double unfolded_l2(const UnfoldedField& f) { return std::sqrt(unfolded_sum(f, 2)); }
double rectangle_l1(const Grid& grid, std::span<const double> w) { return rectangle_sum(grid, w, 1); }
double rectangle_l2(const Grid& grid, std::span<const double> w) { return std::sqrt(rectangle_sum(grid, w, 2)); }

} // namespace fplab
