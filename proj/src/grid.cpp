#include "fplab/grid.hpp"
#include "fplab/errors.hpp"

#include <cmath>
#include <string>

namespace fplab {

double Box::volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= side(a);
    return v;
}

bool Box::contains(const Point& x, double tol) const
{
    for (int a = 0; a < dim; ++a)
        if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
    return true;
}

Grid Grid::with_spacing(const Box& box, double h)
{
    require(box.dim >= 1 && box.dim <= 3, "grid dimension must be 1, 2 or 3");
    require(h > 0.0, "grid spacing must be positive");
    Grid g;
    g.box_ = box;
    g.h_ = h;
    for (int a = 0; a < box.dim; ++a) {
        require(box.side(a) > 0.0, "domain box has non-positive side");
        const double ratio = box.side(a) / h;
        const long n = std::lround(ratio);
        require(std::abs(ratio - static_cast<double>(n)) < 1e-8 * std::max(1.0, ratio),
                "domain side " + std::to_string(box.side(a)) + " is not a multiple of h");
        require(n >= 3, "need at least 4 nodes per axis");
        g.cells_[a] = static_cast<int>(n);
    }
    g.init();
    return g;
}

Grid Grid::with_cells(const Box& box, int cells_axis0)
{
    require(cells_axis0 >= 3, "need at least 4 nodes per axis");
    return with_spacing(box, box.side(0) / cells_axis0);
}

void Grid::init()
{
    size_ = 1;
    for (int a = 0; a < box_.dim; ++a) size_ *= static_cast<std::size_t>(cells_[a] + 1);
    weights_.resize(size_);
    const double hn = std::pow(h_, box_.dim);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        const Index3 ijk = multi_index(idx);
        double w = hn;
        for (int a = 0; a < box_.dim; ++a)
            if (ijk[a] == 0 || ijk[a] == cells_[a]) w *= 0.5;
        weights_[idx] = w;
    }
}

Index3 Grid::multi_index(std::size_t idx) const
{
    const auto n0 = static_cast<std::size_t>(nodes(0));
    const auto n1 = static_cast<std::size_t>(nodes(1));
    return {static_cast<int>(idx % n0), static_cast<int>((idx / n0) % n1), static_cast<int>(idx / (n0 * n1))};
}

Point Grid::coords(const Index3& ijk) const
{
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < box_.dim; ++a) x[a] = box_.lo[a] + h_ * ijk[a];
    return x;
}

Point Grid::coords(std::size_t idx) const { return coords(multi_index(idx)); }

double Grid::weight(std::size_t idx) const { return weights_[idx]; }

bool Grid::on_boundary(std::size_t idx) const
{
    const Index3 ijk = multi_index(idx);
    for (int a = 0; a < box_.dim; ++a)
        if (ijk[a] == 0 || ijk[a] == cells_[a]) return true;
    return false;
}

} // namespace fplab
