#pragma once

#include <span>
#include <vector>

#include "kschemo/grid.hpp"

namespace kschemo {

/// Neumann Laplacian eigenpair on an interval or rectangle,
///   Phi(x, y) = norm_const * cos(m pi x / lx) * cos(n pi y / ly),
///   lambda    = (m pi / lx)^2 + (n pi / ly)^2,
/// normalized so that the integral of Phi^2 over the domain is one.
/// Stripe modes (m, 0) and (0, n) are included; (0, 0) is not a Mode.
struct Mode {
    Domain domain;
    int m = 1;
    int n = 0;
    double lambda = 0.0;
    double norm_const = 0.0;
    int multiplicity = 1;  // number of index tuples sharing this eigenvalue

    bool same_indices(const Mode& other) const { return m == other.m && n == other.n; }
};

/// Throws ParameterError for negative indices, (0, 0), or n != 0 on an interval.
Mode make_mode(const Domain& domain, int m, int n = 0);

/// All modes with 0 < lambda <= lambda_max, ascending in lambda, equal
/// eigenvalues (relative 1e-12) ordered lexicographically by (m, n) and tagged
/// with their multiplicity.
std::vector<Mode> enumerate_modes(const Domain& domain, double lambda_max);

/// Normalized eigenfunction value; throws DomainError outside the closed domain.
double eval_mode(const Mode& mode, double x, double y = 0.0);

/// Integrals of powers of a mode over the domain.
struct ModeMoments {
    double i2 = 0.0;      // int Phi^2 (= 1)
    double i3 = 0.0;      // int Phi^3
    double i4 = 0.0;      // int Phi^4
    double i_grad = 0.0;  // int Phi |grad Phi|^2 (= lambda/2 * i3)
};

/// Closed-form moments from the one-dimensional cosine power integrals.
ModeMoments moments(const Mode& mode);

/// Mode sampled at the cell centers of `grid`.
std::vector<double> sample_mode(const Grid& grid, const Mode& mode);

/// Midpoint-rule inner product of a cell-centered field with the normalized
/// mode. Discrete cosines are orthogonal on cell-centered grids, so this
/// returns the exact modal coefficient of any combination of resolved modes.
/// Throws ShapeError when the grid's domain or size does not match.
double project(const Grid& grid, std::span<const double> field, const Mode& mode);

/// Project onto the constant mode normalized like the others, i.e. the field
/// mean times sqrt(|domain|).
double project_constant(const Grid& grid, std::span<const double> field);

}  // namespace kschemo
