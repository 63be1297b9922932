// AVX2 variants of the stepper kernels. Built with -mavx2 and without FMA so
// that every lane rounds exactly like the scalar reference.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"
#include "kschemo/kernels/kernels.hpp"

namespace kschemo::kernels {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double horizontal_max(__m256d v) {
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, v);
    double m = lanes[0];
    for (std::size_t i = 1; i < kLanes; ++i) m = lanes[i] > m ? lanes[i] : m;
    return m;
}

inline bool any_nan(__m256d flags) { return _mm256_movemask_pd(flags) != 0; }

template <SensitivityKind Phi>
inline __m256d sensitivity_pd(__m256d u) {
    if constexpr (Phi == SensitivityKind::linear) {
        return u;
    } else if constexpr (Phi == SensitivityKind::volume_filling) {
        return _mm256_mul_pd(u, _mm256_sub_pd(_mm256_set1_pd(1.0), u));
    } else {
        return _mm256_set1_pd(1.0);
    }
}

template <SensitivityKind Phi>
inline __m256d sensitivity_slope_pd(__m256d u) {
    if constexpr (Phi == SensitivityKind::linear) {
        return _mm256_set1_pd(1.0);
    } else if constexpr (Phi == SensitivityKind::volume_filling) {
        return _mm256_sub_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(_mm256_set1_pd(2.0), u));
    } else {
        return _mm256_setzero_pd();
    }
}

template <SensitivityKind Phi>
double face_fluxes_impl(const double* ua, const double* ub, const double* va, const double* vb, double* fu,
                        double* fv, std::size_t count, const FaceCoeffs& c) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d inv_h = _mm256_set1_pd(c.inv_h);
    const __m256d chi = _mm256_set1_pd(c.chi);
    const __m256d d1 = _mm256_set1_pd(c.d1);
    const __m256d d2 = _mm256_set1_pd(c.d2);
    __m256d vmax = _mm256_setzero_pd();
    __m256d nan_seen = _mm256_setzero_pd();

    std::size_t k = 0;
    for (; k + kLanes <= count; k += kLanes) {
        const __m256d a = _mm256_loadu_pd(ua + k);
        const __m256d b = _mm256_loadu_pd(ub + k);
        const __m256d um = _mm256_mul_pd(half, _mm256_add_pd(a, b));
        const __m256d du = _mm256_mul_pd(_mm256_sub_pd(b, a), inv_h);
        const __m256d dv = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(vb + k), _mm256_loadu_pd(va + k)), inv_h);
        const __m256d chem = _mm256_mul_pd(_mm256_mul_pd(chi, sensitivity_pd<Phi>(um)), dv);
        _mm256_storeu_pd(fu + k, _mm256_sub_pd(_mm256_mul_pd(d1, du), chem));
        _mm256_storeu_pd(fv + k, _mm256_mul_pd(d2, dv));
        const __m256d mag = abs_pd(_mm256_mul_pd(_mm256_mul_pd(chi, sensitivity_slope_pd<Phi>(um)), dv));
        vmax = _mm256_max_pd(vmax, mag);
        nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(mag, mag, _CMP_UNORD_Q));
    }
    double max_speed = horizontal_max(vmax);
    if (any_nan(nan_seen)) max_speed = std::nan("");
    for (; k < count; ++k) {
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
    const __m256d inv_dx = _mm256_set1_pd(c.inv_dx);
    const __m256d inv_dy = _mm256_set1_pd(c.inv_dy);
    const __m256d mu = _mm256_set1_pd(c.mu);
    const __m256d ubar = _mm256_set1_pd(c.ubar);
    const __m256d alpha = _mm256_set1_pd(c.alpha);
    const __m256d beta = _mm256_set1_pd(c.beta);
    const __m256d scale = _mm256_set1_pd(c.scale);

    std::size_t i = 0;
    for (; i + kLanes <= nx; i += kLanes) {
        __m256d du = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fxu + i + 1), _mm256_loadu_pd(fxu + i)), inv_dx);
        __m256d dv = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fxv + i + 1), _mm256_loadu_pd(fxv + i)), inv_dx);
        if (two_d) {
            du = _mm256_add_pd(
                du, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fyu_hi + i), _mm256_loadu_pd(fyu_lo + i)), inv_dy));
            dv = _mm256_add_pd(
                dv, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(fyv_hi + i), _mm256_loadu_pd(fyv_lo + i)), inv_dy));
        }
        const __m256d uu = _mm256_loadu_pd(u + i);
        const __m256d vv = _mm256_loadu_pd(v + i);
        const __m256d growth = _mm256_mul_pd(_mm256_mul_pd(mu, uu), _mm256_sub_pd(ubar, uu));
        _mm256_storeu_pd(ru + i, _mm256_mul_pd(_mm256_add_pd(du, growth), scale));
        const __m256d kin = _mm256_add_pd(_mm256_sub_pd(dv, _mm256_mul_pd(alpha, vv)), _mm256_mul_pd(beta, uu));
        _mm256_storeu_pd(rv + i, _mm256_mul_pd(kin, scale));
    }
    for (; i < nx; ++i) {
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
    const __m256d rr = _mm256_set1_pd(r);
    {
        const __m256d inv = _mm256_set1_pd(inv_denom[0]);
        std::size_t l = 0;
        for (; l + kLanes <= n_lines; l += kLanes) {
            _mm256_storeu_pd(data + l, _mm256_mul_pd(_mm256_loadu_pd(data + l), inv));
        }
        for (; l < n_lines; ++l) data[l] = data[l] * inv_denom[0];
    }
    for (std::size_t k = 1; k < n_along; ++k) {
        double* row = data + k * n_lines;
        const double* prev = row - n_lines;
        const __m256d inv = _mm256_set1_pd(inv_denom[k]);
        std::size_t l = 0;
        for (; l + kLanes <= n_lines; l += kLanes) {
            const __m256d t = _mm256_add_pd(_mm256_loadu_pd(row + l), _mm256_mul_pd(rr, _mm256_loadu_pd(prev + l)));
            _mm256_storeu_pd(row + l, _mm256_mul_pd(t, inv));
        }
        for (; l < n_lines; ++l) row[l] = (row[l] + r * prev[l]) * inv_denom[k];
    }
    for (std::size_t k = n_along - 1; k-- > 0;) {
        double* row = data + k * n_lines;
        const double* next = row + n_lines;
        const __m256d cp = _mm256_set1_pd(cprime[k]);
        std::size_t l = 0;
        for (; l + kLanes <= n_lines; l += kLanes) {
            _mm256_storeu_pd(row + l, _mm256_sub_pd(_mm256_loadu_pd(row + l), _mm256_mul_pd(cp, _mm256_loadu_pd(next + l))));
        }
        for (; l < n_lines; ++l) row[l] = row[l] - cprime[k] * next[l];
    }
}

inline void transpose4(__m256d& a, __m256d& b, __m256d& c, __m256d& d) {
    const __m256d t0 = _mm256_unpacklo_pd(a, b);
    const __m256d t1 = _mm256_unpackhi_pd(a, b);
    const __m256d t2 = _mm256_unpacklo_pd(c, d);
    const __m256d t3 = _mm256_unpackhi_pd(c, d);
    a = _mm256_permute2f128_pd(t0, t2, 0x20);
    b = _mm256_permute2f128_pd(t1, t3, 0x20);
    c = _mm256_permute2f128_pd(t0, t2, 0x31);
    d = _mm256_permute2f128_pd(t1, t3, 0x31);
}

// Four rows at a time: interleave them into scratch (element k of row q at
// scratch[4 k + q]), solve as four lines, and scatter back.
void tridiagonal_rows(double* data, std::size_t n_along, std::size_t n_rows, const double* cprime,
                      const double* inv_denom, double r, double* scratch) {
    std::size_t l = 0;
    for (; l + kLanes <= n_rows; l += kLanes) {
        double* r0 = data + l * n_along;
        double* r1 = r0 + n_along;
        double* r2 = r1 + n_along;
        double* r3 = r2 + n_along;
        std::size_t k = 0;
        for (; k + kLanes <= n_along; k += kLanes) {
            __m256d a = _mm256_loadu_pd(r0 + k), b = _mm256_loadu_pd(r1 + k);
            __m256d c = _mm256_loadu_pd(r2 + k), d = _mm256_loadu_pd(r3 + k);
            transpose4(a, b, c, d);
            _mm256_storeu_pd(scratch + 4 * k, a);
            _mm256_storeu_pd(scratch + 4 * k + 4, b);
            _mm256_storeu_pd(scratch + 4 * k + 8, c);
            _mm256_storeu_pd(scratch + 4 * k + 12, d);
        }
        for (; k < n_along; ++k) {
            scratch[4 * k] = r0[k];
            scratch[4 * k + 1] = r1[k];
            scratch[4 * k + 2] = r2[k];
            scratch[4 * k + 3] = r3[k];
        }
        tridiagonal_lines(scratch, n_along, kLanes, cprime, inv_denom, r);
        for (k = 0; k + kLanes <= n_along; k += kLanes) {
            __m256d a = _mm256_loadu_pd(scratch + 4 * k), b = _mm256_loadu_pd(scratch + 4 * k + 4);
            __m256d c = _mm256_loadu_pd(scratch + 4 * k + 8), d = _mm256_loadu_pd(scratch + 4 * k + 12);
            transpose4(a, b, c, d);
            _mm256_storeu_pd(r0 + k, a);
            _mm256_storeu_pd(r1 + k, b);
            _mm256_storeu_pd(r2 + k, c);
            _mm256_storeu_pd(r3 + k, d);
        }
        for (; k < n_along; ++k) {
            r0[k] = scratch[4 * k];
            r1[k] = scratch[4 * k + 1];
            r2[k] = scratch[4 * k + 2];
            r3[k] = scratch[4 * k + 3];
        }
    }
    for (; l < n_rows; ++l) {
        double* x = data + l * n_along;
        x[0] = x[0] * inv_denom[0];
        for (std::size_t k = 1; k < n_along; ++k) x[k] = (x[k] + r * x[k - 1]) * inv_denom[k];
        for (std::size_t k = n_along - 1; k-- > 0;) x[k] = x[k] - cprime[k] * x[k + 1];
    }
}

double add_max_abs(double* x, const double* d, std::size_t n) {
    __m256d vmax = _mm256_setzero_pd();
    __m256d nan_seen = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) {
        const __m256d dd = _mm256_loadu_pd(d + k);
        _mm256_storeu_pd(x + k, _mm256_add_pd(_mm256_loadu_pd(x + k), dd));
        const __m256d mag = abs_pd(dd);
        vmax = _mm256_max_pd(vmax, mag);
        nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(mag, mag, _CMP_UNORD_Q));
    }
    double m = horizontal_max(vmax);
    if (any_nan(nan_seen)) m = std::nan("");
    for (; k < n; ++k) {
        x[k] = x[k] + d[k];
        const double a = std::abs(d[k]);
        m = a > m || a != a ? a : m;
    }
    return m;
}

double max_value(const double* x, std::size_t n) {
    std::size_t k = 0;
    double m = x[0];
    if (n >= kLanes) {
        __m256d vmax = _mm256_loadu_pd(x);
        __m256d nan_seen = _mm256_cmp_pd(vmax, vmax, _CMP_UNORD_Q);
        for (k = kLanes; k + kLanes <= n; k += kLanes) {
            const __m256d xx = _mm256_loadu_pd(x + k);
            vmax = _mm256_max_pd(vmax, xx);
            nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(xx, xx, _CMP_UNORD_Q));
        }
        m = horizontal_max(vmax);
        if (any_nan(nan_seen)) m = std::nan("");
    }
    for (; k < n; ++k) m = x[k] > m || x[k] != x[k] ? x[k] : m;
    return m;
}

}  // namespace

const KernelSet& avx2_kernel_table() {
    static const KernelSet set{"avx2",            &face_fluxes, &cell_rhs,  &tridiagonal_lines,
                               &tridiagonal_rows, &add_max_abs, &max_value};
    return set;
}

}  // namespace kschemo::kernels
