#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace fplab {

using Point = std::array<double, 3>;
using Index3 = std::array<int, 3>;

// Axis-aligned box in dimension n (components beyond n are ignored).
struct Box {
    int dim = 3;
    Point lo{0.0, 0.0, 0.0};
    Point hi{1.0, 1.0, 1.0};

    double side(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const;
    bool contains(const Point& x, double tol = 0.0) const;
};

// Vertex-centred uniform grid: nodes lo + i*h, i = 0..cells[axis].
class Grid {
public:
    Grid() = default;
    // Uniform spacing h; every side of the box must be an integer multiple of h.
    static Grid with_spacing(const Box& box, double h);
    // Given number of cells along axis 0; spacing derived from it.
    static Grid with_cells(const Box& box, int cells_axis0);

    int dim() const { return box_.dim; }
    double h() const { return h_; }
    const Box& box() const { return box_; }
    int nodes(int axis) const { return axis < box_.dim ? cells_[axis] + 1 : 1; }
    int cells(int axis) const { return axis < box_.dim ? cells_[axis] : 0; }
    std::size_t size() const { return size_; }

    std::size_t index(int i, int j = 0, int k = 0) const
    {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nodes(0)) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(nodes(1)) * static_cast<std::size_t>(k));
    }
    Index3 multi_index(std::size_t idx) const;
    Point coords(std::size_t idx) const;
    Point coords(const Index3& ijk) const;
    // Trapezoid weight (product of 1 or 1/2 per axis) times h^n.
    double weight(std::size_t idx) const;
    const std::vector<double>& weights() const { return weights_; }
    bool on_boundary(std::size_t idx) const;

private:
    Box box_;
    double h_ = 0.0;
    std::array<int, 3> cells_{0, 0, 0};
    std::size_t size_ = 0;
    std::vector<double> weights_;

    void init();
};

} // namespace fplab
