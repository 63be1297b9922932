#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"
#include "kschemo/kernels/kernels.hpp"

namespace kschemo::kernels {

namespace {

template <SensitivityKind Phi>
double face_fluxes_impl(const double* ua, const double* ub, const double* va, const double* vb, double* fu,
                        double* fv, std::size_t count, const FaceCoeffs& c) {
    double max_speed = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double um = 0.5 * (ua[k] + ub[k]);
        const double du = (ub[k] - ua[k]) * c.inv_h;
        const double dv = (vb[k] - va[k]) * c.inv_h;
        const double chem = c.chi * sensitivity_value<Phi>(um) * dv;
        fu[k] = c.d1 * du - chem;
        fv[k] = c.d2 * dv;
        const double a = std::abs(c.chi * sensitivity_slope<Phi>(um) * dv);
        max_speed = a > max_speed || a != a ? a : max_speed;
    }
    return max_speed;
}

double face_fluxes(const double* ua, const double* ub, const double* va, const double* vb, double* fu, double* fv,
                   std::size_t count, const FaceCoeffs& c) {
    switch (c.phi) {
        case SensitivityKind::linear:
            return face_fluxes_impl<SensitivityKind::linear>(ua, ub, va, vb, fu, fv, count, c);
        case SensitivityKind::volume_filling:
            return face_fluxes_impl<SensitivityKind::volume_filling>(ua, ub, va, vb, fu, fv, count, c);
        case SensitivityKind::constant:
            return face_fluxes_impl<SensitivityKind::constant>(ua, ub, va, vb, fu, fv, count, c);
    }
    return 0.0;
}

void cell_rhs(const double* fxu, const double* fxv, const double* fyu_lo, const double* fyu_hi,
              const double* fyv_lo, const double* fyv_hi, const double* u, const double* v, double* ru, double* rv,
              std::size_t nx, const CellCoeffs& c) {
    const bool two_d = fyu_lo != nullptr;
    for (std::size_t i = 0; i < nx; ++i) {
        double du = (fxu[i + 1] - fxu[i]) * c.inv_dx;
        double dv = (fxv[i + 1] - fxv[i]) * c.inv_dx;
        if (two_d) {
            du = du + (fyu_hi[i] - fyu_lo[i]) * c.inv_dy;
            dv = dv + (fyv_hi[i] - fyv_lo[i]) * c.inv_dy;
        }
        ru[i] = (du + c.mu * u[i] * (c.ubar - u[i])) * c.scale;
        rv[i] = ((dv - c.alpha * v[i]) + c.beta * u[i]) * c.scale;
    }
}

void tridiagonal_lines(double* data, std::size_t n_along, std::size_t n_lines, const double* cprime,
                       const double* inv_denom, double r) {
    for (std::size_t l = 0; l < n_lines; ++l) data[l] = data[l] * inv_denom[0];
    for (std::size_t k = 1; k < n_along; ++k) {
        double* row = data + k * n_lines;
        const double* prev = row - n_lines;
        const double inv = inv_denom[k];
        for (std::size_t l = 0; l < n_lines; ++l) row[l] = (row[l] + r * prev[l]) * inv;
    }
    for (std::size_t k = n_along - 1; k-- > 0;) {
        double* row = data + k * n_lines;
        const double* next = row + n_lines;
        const double cp = cprime[k];
        for (std::size_t l = 0; l < n_lines; ++l) row[l] = row[l] - cp * next[l];
    }
}

void tridiagonal_rows(double* data, std::size_t n_along, std::size_t n_rows, const double* cprime,
                      const double* inv_denom, double r, double* /*scratch*/) {
    for (std::size_t l = 0; l < n_rows; ++l) {
        double* x = data + l * n_along;
        x[0] = x[0] * inv_denom[0];
        for (std::size_t k = 1; k < n_along; ++k) x[k] = (x[k] + r * x[k - 1]) * inv_denom[k];
        for (std::size_t k = n_along - 1; k-- > 0;) x[k] = x[k] - cprime[k] * x[k + 1];
    }
}

double add_max_abs(double* x, const double* d, std::size_t n) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = x[k] + d[k];
        const double a = std::abs(d[k]);
        m = a > m || a != a ? a : m;
    }
    return m;
}

double max_value(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t k = 1; k < n; ++k) m = x[k] > m || x[k] != x[k] ? x[k] : m;
    return m;
}

}  // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set{"scalar",          &face_fluxes, &cell_rhs,  &tridiagonal_lines,
                               &tridiagonal_rows, &add_max_abs, &max_value};
    return set;
}

void factor_neumann_tridiagonal(std::size_t n, double r, double* cprime, double* inv_denom) {
    // Diagonal 1 + 2r inside, 1 + r at both ends; off-diagonals -r.
    double denom = 1.0 + r;
    inv_denom[0] = 1.0 / denom;
    cprime[0] = -r * inv_denom[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double diag = (k + 1 == n) ? 1.0 + r : 1.0 + 2.0 * r;
        denom = diag + r * cprime[k - 1];
        inv_denom[k] = 1.0 / denom;
        cprime[k] = -r * inv_denom[k];
    }
}

}  // namespace kschemo::kernels
