#pragma once

#include <cstddef>

namespace kschemo {

enum class DomainKind { interval, rectangle };

/// (0, lx) or (0, lx) x (0, ly).
struct Domain {
    DomainKind kind = DomainKind::interval;
    double lx = 1.0;
    double ly = 1.0;  // ignored for intervals

    static Domain interval(double length);                  // throws ParameterError
    static Domain rectangle(double lx, double ly);          // throws ParameterError
    static Domain square(double side) { return rectangle(side, side); }

    int dims() const { return kind == DomainKind::interval ? 1 : 2; }
    double area() const { return kind == DomainKind::interval ? lx : lx * ly; }

    friend bool operator==(const Domain&, const Domain&) = default;
};

/// Cell-centered grid: nx (x ny) cells, centers at (i + 1/2) dx. Storage is
/// row-major with x fastest, index j * nx + i. Intervals have ny == 1.
class Grid {
public:
    static constexpr int kMinCells = 8;

    Grid(const Domain& domain, int nx, int ny = 1);  // throws ParameterError

    const Domain& domain() const { return domain_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    int dims() const { return domain_.dims(); }
    /// Volume of one cell (dx, or dx * dy).
    double cell_volume() const { return dims() == 1 ? dx_ : dx_ * dy_; }
    double min_spacing() const { return dims() == 1 ? dx_ : (dx_ < dy_ ? dx_ : dy_); }

    double x(int i) const { return (i + 0.5) * dx_; }
    double y(int j) const { return dims() == 1 ? 0.0 : (j + 0.5) * dy_; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Domain domain_;
    int nx_;
    int ny_;
    double dx_;
    double dy_;
};

}  // namespace kschemo
