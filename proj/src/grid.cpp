#include "kschemo/grid.hpp"

#include <cmath>
#include <string>

#include "kschemo/errors.hpp"

namespace kschemo {

Domain Domain::interval(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ParameterError("domain length must be positive");
    }
    return Domain{DomainKind::interval, length, 1.0};
}

Domain Domain::rectangle(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw ParameterError("domain lengths must be positive");
    }
    return Domain{DomainKind::rectangle, lx, ly};
}

Grid::Grid(const Domain& domain, int nx, int ny) : domain_(domain), nx_(nx), ny_(ny) {
    if (domain.dims() == 1) {
        if (ny != 1) throw ParameterError("interval grids have ny == 1");
        if (nx < kMinCells) throw ParameterError("grid needs at least 8 cells per axis");
    } else if (nx < kMinCells || ny < kMinCells) {
        throw ParameterError("grid needs at least 8 cells per axis");
    }
    dx_ = domain.lx / nx;
    dy_ = domain.dims() == 1 ? 1.0 : domain.ly / ny;
}

}  // namespace kschemo
