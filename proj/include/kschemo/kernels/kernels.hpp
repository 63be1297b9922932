#pragma once

#include <cstddef>
#include <string_view>

#include "kschemo/model.hpp"

namespace kschemo::kernels {

/// Coefficients for fluxes across a set of faces that share one spacing h.
struct FaceCoeffs {
    double d1 = 1.0;
    double d2 = 1.0;
    double chi = 0.0;
    double inv_h = 1.0;
    SensitivityKind phi = SensitivityKind::linear;
};

/// Coefficients for the per-cell divergence and kinetics.
struct CellCoeffs {
    double inv_dx = 1.0;
    double inv_dy = 1.0;
    double mu = 1.0;
    double ubar = 1.0;
    double alpha = 1.0;
    double beta = 1.0;  // f(u) = beta u
    double scale = 1.0; // multiplies both right-hand sides (the step size, or 1)
};

/// Inner-loop primitives of the finite-volume stepper. Every implementation
/// performs the same floating-point operations in the same order, so all
/// variants produce bitwise-identical results.
struct KernelSet {
    std::string_view name;

    /// For each face k in [0, count) between cells a[k] and b[k] (b on the
    /// positive side):
    ///   fu[k] = d1 (ub - ua) / h - chi phi(mean u) (vb - va) / h
    ///   fv[k] = d2 (vb - va) / h
    /// Returns the largest characteristic speed |chi phi_u(mean u) (vb - va) / h|.
    double (*face_fluxes)(const double* ua, const double* ub, const double* va, const double* vb, double* fu,
                          double* fv, std::size_t count, const FaceCoeffs& c);

    /// Right-hand sides for one row of nx cells. fxu/fxv hold the nx + 1 x-face
    /// fluxes of the row (boundary entries zero). The y-face pointers give the
    /// fluxes below and above each cell, or are null on 1D grids.
    ///   ru = scale (div(fu) + mu u (ubar - u)),  rv = scale (div(fv) - alpha v + beta u)
    void (*cell_rhs)(const double* fxu, const double* fxv, const double* fyu_lo, const double* fyu_hi,
                     const double* fyv_lo, const double* fyv_hi, const double* u, const double* v, double* ru,
                     double* rv, std::size_t nx, const CellCoeffs& c);

    /// Solves (I - r L) x = d in place for n_lines independent Neumann lines
    /// of length n_along, where L is the [1, -2, 1] stencil with reflected ends.
    /// Element k of line l is data[k * n_lines + l]. cprime and inv_denom come
    /// from factor_neumann_tridiagonal.
    void (*tridiagonal_lines)(double* data, std::size_t n_along, std::size_t n_lines, const double* cprime,
                              const double* inv_denom, double r);

    /// Same system for n_rows contiguous lines of length n_along: element k
    /// of line l is data[l * n_along + k]. scratch holds 4 * n_along doubles.
    void (*tridiagonal_rows)(double* data, std::size_t n_along, std::size_t n_rows, const double* cprime,
                             const double* inv_denom, double r, double* scratch);

    /// x[k] += d[k]; returns max |d[k]| (NaN propagates).
    double (*add_max_abs)(double* x, const double* d, std::size_t n);

    /// max x[k] (NaN propagates).
    double (*max_value)(const double* x, std::size_t n);
};

/// Thomas factorization of I - r L on n unknowns (n >= 2).
void factor_neumann_tridiagonal(std::size_t n, double r, double* cprime, double* inv_denom);

const KernelSet& scalar_kernels();

/// Null when the build or the running CPU lacks AVX2.
const KernelSet* avx2_kernels();

/// AVX2 if available, else scalar. The environment variable KSCHEMO_KERNELS
/// (scalar | avx2) overrides the choice; an unavailable request falls back to scalar.
const KernelSet& default_kernels();

}  // namespace kschemo::kernels
