#include "kschemo/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kschemo/errors.hpp"

namespace kschemo {

namespace {

using std::numbers::pi;

// Integrals over (0, L) of powers of cos(m pi x / L) and of cos * sin^2.
double cos2_integral(int m, double length) { return m == 0 ? length : 0.5 * length; }
double cos3_integral(int m, double length) { return m == 0 ? length : 0.0; }
double cos4_integral(int m, double length) { return m == 0 ? length : 0.375 * length; }
double cos_sin2_integral(int /*m*/, double /*length*/) { return 0.0; }

double wavenumber(int index, double length) { return index * pi / length; }

bool is_interval(const Domain& d) { return d.kind == DomainKind::interval; }

}  // namespace

Mode make_mode(const Domain& domain, int m, int n) {
    if (m < 0 || n < 0) throw ParameterError("mode indices must be nonnegative");
    if (m == 0 && n == 0) throw ParameterError("the constant mode (0, 0) is not a Mode");
    if (is_interval(domain) && n != 0) throw ParameterError("interval modes have n == 0");

    Mode mode;
    mode.domain = domain;
    mode.m = m;
    mode.n = n;
    const double kx = wavenumber(m, domain.lx);
    if (is_interval(domain)) {
        mode.lambda = kx * kx;
        mode.norm_const = 1.0 / std::sqrt(cos2_integral(m, domain.lx));
    } else {
        const double ky = wavenumber(n, domain.ly);
        mode.lambda = kx * kx + ky * ky;
        mode.norm_const =
            1.0 / std::sqrt(cos2_integral(m, domain.lx) * cos2_integral(n, domain.ly));
    }
    return mode;
}

std::vector<Mode> enumerate_modes(const Domain& domain, double lambda_max) {
    std::vector<Mode> modes;
    if (!(lambda_max > 0.0)) return modes;

    const double k_max = std::sqrt(lambda_max);
    const int m_max = static_cast<int>(std::floor(k_max * domain.lx / pi)) + 1;
    const int n_max = is_interval(domain) ? 0 : static_cast<int>(std::floor(k_max * domain.ly / pi)) + 1;
    for (int m = 0; m <= m_max; ++m) {
        for (int n = 0; n <= n_max; ++n) {
            if (m == 0 && n == 0) continue;
            Mode mode = make_mode(domain, m, n);
            if (mode.lambda <= lambda_max) modes.push_back(mode);
        }
    }

    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b) { return a.lambda < b.lambda; });

    // Group numerically equal eigenvalues, then order each group by indices.
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); };
    for (std::size_t begin = 0; begin < modes.size();) {
        std::size_t end = begin + 1;
        while (end < modes.size() && same(modes[begin].lambda, modes[end].lambda)) ++end;
        std::sort(modes.begin() + static_cast<std::ptrdiff_t>(begin),
                  modes.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Mode& a, const Mode& b) {
                      return a.m != b.m ? a.m < b.m : a.n < b.n;
                  });
        for (std::size_t i = begin; i < end; ++i) modes[i].multiplicity = static_cast<int>(end - begin);
        begin = end;
    }
    return modes;
}

double eval_mode(const Mode& mode, double x, double y) {
    const Domain& d = mode.domain;
    if (!(x >= 0.0 && x <= d.lx)) throw DomainError("x = " + std::to_string(x) + " outside domain");
    double value = mode.norm_const * std::cos(wavenumber(mode.m, d.lx) * x);
    if (!is_interval(d)) {
        if (!(y >= 0.0 && y <= d.ly)) throw DomainError("y = " + std::to_string(y) + " outside domain");
        value *= std::cos(wavenumber(mode.n, d.ly) * y);
    }
    return value;
}

ModeMoments moments(const Mode& mode) {
    const Domain& d = mode.domain;
    const double c = mode.norm_const;
    ModeMoments mom;
    if (is_interval(d)) {
        const double a = wavenumber(mode.m, d.lx);
        mom.i2 = c * c * cos2_integral(mode.m, d.lx);
        mom.i3 = c * c * c * cos3_integral(mode.m, d.lx);
        mom.i4 = c * c * c * c * cos4_integral(mode.m, d.lx);
        mom.i_grad = c * c * c * a * a * cos_sin2_integral(mode.m, d.lx);
    } else {
        const double a = wavenumber(mode.m, d.lx);
        const double b = wavenumber(mode.n, d.ly);
        mom.i2 = c * c * cos2_integral(mode.m, d.lx) * cos2_integral(mode.n, d.ly);
        mom.i3 = c * c * c * cos3_integral(mode.m, d.lx) * cos3_integral(mode.n, d.ly);
        mom.i4 = c * c * c * c * cos4_integral(mode.m, d.lx) * cos4_integral(mode.n, d.ly);
        mom.i_grad = c * c * c *
                     (a * a * cos_sin2_integral(mode.m, d.lx) * cos3_integral(mode.n, d.ly) +
                      b * b * cos3_integral(mode.m, d.lx) * cos_sin2_integral(mode.n, d.ly));
    }
    if (std::abs(mom.i_grad - 0.5 * mode.lambda * mom.i3) > 1e-8) {
        throw std::logic_error("moment identity int Phi|grad Phi|^2 = lambda/2 int Phi^3 violated");
    }
    return mom;
}

std::vector<double> sample_mode(const Grid& grid, const Mode& mode) {
    if (!(grid.domain() == mode.domain)) throw ShapeError("grid and mode live on different domains");
    std::vector<double> out(grid.size());
    const double kx = wavenumber(mode.m, mode.domain.lx);
    const double ky = is_interval(mode.domain) ? 0.0 : wavenumber(mode.n, mode.domain.ly);
    for (int j = 0; j < grid.ny(); ++j) {
        const double cy = grid.dims() == 1 ? 1.0 : std::cos(ky * grid.y(j));
        for (int i = 0; i < grid.nx(); ++i) {
            out[grid.index(i, j)] = mode.norm_const * std::cos(kx * grid.x(i)) * cy;
        }
    }
    return out;
}

double project(const Grid& grid, std::span<const double> field, const Mode& mode) {
    if (!(grid.domain() == mode.domain)) throw ShapeError("grid and mode live on different domains");
    if (field.size() != grid.size()) {
        throw ShapeError("field has " + std::to_string(field.size()) + " entries, grid has " +
                         std::to_string(grid.size()));
    }
    const double kx = wavenumber(mode.m, mode.domain.lx);
    const double ky = is_interval(mode.domain) ? 0.0 : wavenumber(mode.n, mode.domain.ly);
    std::vector<double> cx(static_cast<std::size_t>(grid.nx()));
    for (int i = 0; i < grid.nx(); ++i) cx[static_cast<std::size_t>(i)] = std::cos(kx * grid.x(i));

    double total = 0.0;
    for (int j = 0; j < grid.ny(); ++j) {
        const double cy = grid.dims() == 1 ? 1.0 : std::cos(ky * grid.y(j));
        double row = 0.0;
        for (int i = 0; i < grid.nx(); ++i) row += field[grid.index(i, j)] * cx[static_cast<std::size_t>(i)];
        total += row * cy;
    }
    return total * mode.norm_const * grid.cell_volume();
}

double project_constant(const Grid& grid, std::span<const double> field) {
    if (field.size() != grid.size()) throw ShapeError("field size does not match grid");
    double total = 0.0;
    for (double value : field) total += value;
    return total * grid.cell_volume() / std::sqrt(grid.domain().area());
}

}  // namespace kschemo
