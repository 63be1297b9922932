#include "kschemo/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kschemo/errors.hpp"

namespace kschemo {

namespace {

struct Coefficients {
    double phi;
    double fp;
};

Coefficients homogeneous_coefficients(const ModelParams& p) {
    const HomogeneousState hs = homogeneous_state(p);
    return {p.phi().value(hs.u, hs.v), p.f().first_derivative(hs.u)};
}

std::string mode_label(const Mode& mode) {
    return "(" + std::to_string(mode.m) + "," + std::to_string(mode.n) + ")";
}

void require_branch_assumptions(const ModelParams& p) {
    const auto violations = validate_for_branch_analytics(p);
    if (!violations.empty()) throw BranchAssumptionError(violations.front());
}

using Matrix4 = std::array<std::array<double, 4>, 4>;
using Vector4 = std::array<double, 4>;

// LU with partial pivoting; returns false if a pivot vanishes.
bool lu_factor(Matrix4& a, std::array<int, 4>& perm) {
    for (int i = 0; i < 4; ++i) perm[i] = i;
    for (int k = 0; k < 4; ++k) {
        int pivot = k;
        for (int i = k + 1; i < 4; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
        }
        if (a[pivot][k] == 0.0) return false;
        std::swap(a[k], a[pivot]);
        std::swap(perm[k], perm[pivot]);
        for (int i = k + 1; i < 4; ++i) {
            a[i][k] /= a[k][k];
            for (int j = k + 1; j < 4; ++j) a[i][j] -= a[i][k] * a[k][j];
        }
    }
    return true;
}

Vector4 lu_solve(const Matrix4& lu, const std::array<int, 4>& perm, const Vector4& b) {
    Vector4 x{};
    for (int i = 0; i < 4; ++i) {
        double s = b[perm[i]];
        for (int j = 0; j < i; ++j) s -= lu[i][j] * x[j];
        x[i] = s;
    }
    for (int i = 3; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < 4; ++j) s -= lu[i][j] * x[j];
        x[i] = s / lu[i][i];
    }
    return x;
}

double norm1(const Matrix4& a) {
    double best = 0.0;
    for (int j = 0; j < 4; ++j) {
        double col = 0.0;
        for (int i = 0; i < 4; ++i) col += std::abs(a[i][j]);
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

Linearization linearize_at(const ModelParams& p, double lambda) {
    const Coefficients c = homogeneous_coefficients(p);
    Linearization lin;
    lin.lambda = lambda;
    lin.h[0][0] = -p.d1() * lambda - p.mu() * p.ubar();
    lin.h[0][1] = p.chi() * c.phi * lambda;
    lin.h[1][0] = c.fp;
    lin.h[1][1] = -p.d2() * lambda - p.alpha();
    lin.trace = lin.h[0][0] + lin.h[1][1];
    lin.det = lin.h[0][0] * lin.h[1][1] - lin.h[0][1] * lin.h[1][0];

    // Roots of sigma^2 - trace sigma + det.
    const double disc = lin.trace * lin.trace - 4.0 * lin.det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double q = 0.5 * (lin.trace + std::copysign(root, lin.trace));
        double r1 = q;
        double r2 = q != 0.0 ? lin.det / q : 0.0;
        if (r1 < r2) std::swap(r1, r2);
        lin.growth_rates = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        lin.growth_rates = {std::complex<double>(0.5 * lin.trace, im),
                            std::complex<double>(0.5 * lin.trace, -im)};
    }
    return lin;
}

Linearization linearize(const ModelParams& p, const Mode& mode) { return linearize_at(p, mode.lambda); }

double chi_bar_at(const ModelParams& p, double lambda) {
    const Coefficients c = homogeneous_coefficients(p);
    if (c.fp * c.phi == 0.0) {
        throw DegenerateModelError("f'(ubar) * phi(ubar, vbar) vanishes; no bifurcation values");
    }
    if (!(lambda > 0.0)) throw ParameterError("bifurcation values need lambda > 0");
    return (p.d1() * lambda + p.mu() * p.ubar()) * (p.d2() * lambda + p.alpha()) / (c.fp * c.phi * lambda);
}

double chi_bar(const ModelParams& p, const Mode& mode) { return chi_bar_at(p, mode.lambda); }

double q_ratio(const ModelParams& p, const Mode& mode) {
    const Coefficients c = homogeneous_coefficients(p);
    if (c.fp == 0.0) throw DegenerateModelError("f'(ubar) vanishes; Q undefined");
    return (p.d2() * mode.lambda + p.alpha()) / c.fp;
}

double critical_wavenumber_squared(const ModelParams& p) {
    return std::sqrt(p.alpha() * p.mu() * p.ubar() / (p.d1() * p.d2()));
}

Threshold chi_threshold(const ModelParams& p, const Domain& domain) {
    const Coefficients c = homogeneous_coefficients(p);
    if (!(c.fp * c.phi > 0.0)) {
        throw DegenerateModelError("chemotactic threshold needs f'(ubar) phi(ubar, vbar) > 0");
    }
    Threshold th;
    th.lambda_star = critical_wavenumber_squared(p);
    const double longest = domain.kind == DomainKind::interval ? domain.lx : std::max(domain.lx, domain.ly);
    const double lambda_first = std::numbers::pi * std::numbers::pi / (longest * longest);
    th.lambda_cutoff = 4.0 * th.lambda_star + lambda_first;

    const std::vector<Mode> modes = enumerate_modes(domain, th.lambda_cutoff);
    th.chi0 = std::numeric_limits<double>::infinity();
    for (const Mode& mode : modes) th.chi0 = std::min(th.chi0, chi_bar(p, mode));
    for (const Mode& mode : modes) {
        if (std::abs(chi_bar(p, mode) - th.chi0) <= 1e-12 * th.chi0) th.minimizers.push_back(mode);
    }
    return th;
}

std::vector<std::pair<Mode, Mode>> chi_collisions(const ModelParams& p, const std::vector<Mode>& modes) {
    std::vector<std::pair<Mode, Mode>> out;
    const double target = p.alpha() * p.mu() * p.ubar();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            const double li = modes[i].lambda;
            const double lj = modes[j].lambda;
            if (std::abs(li - lj) <= 1e-12 * std::max(li, lj)) continue;
            if (std::abs(p.d1() * p.d2() * li * lj - target) <= 1e-12 * target) {
                out.emplace_back(modes[i], modes[j]);
            }
        }
    }
    return out;
}

double chi_prime(const ModelParams& p, const Mode& mode, const ModeMoments& mom) {
    require_branch_assumptions(p);
    const HomogeneousState hs = homogeneous_state(p);
    const SensitivityJet jet = p.phi().jet(hs.u, hs.v);
    const double lambda = mode.lambda;
    const double cb = chi_bar(p, mode);
    const double q = q_ratio(p, mode);
    const double bracket = p.mu() * q * q - 0.5 * lambda * cb * (jet.phi_u * q + jet.phi_v);
    return bracket * mom.i3 / (lambda * jet.phi);
}

MomentSolution solve_moment_system(const ModelParams& p, const Mode& mode, const ModeMoments& mom) {
    require_branch_assumptions(p);
    if (std::abs(chi_prime(p, mode, mom)) > kSlopeTolerance) {
        throw BranchTypeError("moment system applies to pitchfork branches only; mode " + mode_label(mode) +
                              " is transcritical");
    }
    const HomogeneousState hs = homogeneous_state(p);
    const SensitivityJet jet = p.phi().jet(hs.u, hs.v);
    const double lam = mode.lambda;
    const double cb = chi_bar(p, mode);
    const double q = q_ratio(p, mode);
    const double fp = p.f().first_derivative(hs.u);
    const double phi = jet.phi;
    const double su = p.d1() * lam;
    const double sv = p.d2() * lam;
    const double cross = jet.phi_u * q + jet.phi_v;

    // Unknowns (int Phi^2 psi1, int |grad Phi|^2 psi1, int Phi^2 psi2, int |grad Phi|^2 psi2).
    const Matrix4 a = {{
        {-2.0 * su - p.mu() * p.ubar(), 2.0 * p.d1(), 2.0 * cb * lam * phi, -2.0 * cb * phi},
        {2.0 * p.d1() * lam * lam, -2.0 * su - p.mu() * p.ubar(), -2.0 * cb * lam * lam * phi, 2.0 * cb * lam * phi},
        {fp, 0.0, -2.0 * sv - p.alpha(), 2.0 * p.d2()},
        {0.0, fp, 2.0 * p.d2() * lam * lam, -2.0 * sv - p.alpha()},
    }};
    // The transport term contributes -(2/3) lambda chi_bar (phi_u Q + phi_v) int Phi^4
    // to the first row (int Phi^2 |grad Phi|^2 = lambda/3 int Phi^4 for cosines).
    const Vector4 b = {
        (-2.0 / 3.0 * cb * cross * lam + p.mu() * q * q) * mom.i4,
        (2.0 / 3.0 * lam * lam * cb * cross + lam * p.mu() * q * q / 3.0) * mom.i4,
        0.0,
        0.0,
    };

    Matrix4 lu = a;
    std::array<int, 4> perm{};
    if (!lu_factor(lu, perm)) {
        throw IllConditionedError("moment system singular for mode " + mode_label(mode));
    }
    Matrix4 inverse{};
    for (int col = 0; col < 4; ++col) {
        Vector4 e{};
        e[col] = 1.0;
        const Vector4 x = lu_solve(lu, perm, e);
        for (int row = 0; row < 4; ++row) inverse[row][col] = x[row];
    }
    MomentSolution ms;
    ms.condition = norm1(a) * norm1(inverse);
    if (!(ms.condition <= 1e12)) {
        throw IllConditionedError("moment system for mode " + mode_label(mode) + " has condition " +
                                  std::to_string(ms.condition));
    }
    const Vector4 x = lu_solve(lu, perm, b);
    ms.m1 = x[0];
    ms.g1 = x[1];
    ms.m2 = x[2];
    ms.g2 = x[3];

    double res_norm = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 4; ++i) {
        double r = -b[i];
        double row_scale = std::abs(b[i]);
        for (int j = 0; j < 4; ++j) {
            r += a[i][j] * x[j];
            row_scale += std::abs(a[i][j] * x[j]);
        }
        res_norm = std::max(res_norm, std::abs(r));
        scale = std::max(scale, row_scale);
    }
    ms.residual = scale > 0.0 ? res_norm / scale : 0.0;
    ms.closure_exact = mode.domain.kind == DomainKind::interval || mode.m == 0 || mode.n == 0;
    return ms;
}

double chi_double_prime(const ModelParams& p, const Mode& mode, const ModeMoments& mom,
                        const MomentSolution& ms) {
    require_branch_assumptions(p);
    if (std::abs(chi_prime(p, mode, mom)) > kSlopeTolerance) {
        throw BranchTypeError("chi'' is defined here only for pitchfork branches; mode " + mode_label(mode) +
                              " is transcritical");
    }
    const HomogeneousState hs = homogeneous_state(p);
    const SensitivityJet jet = p.phi().jet(hs.u, hs.v);
    const double lam = mode.lambda;
    const double cb = chi_bar(p, mode);
    const double q = q_ratio(p, mode);
    const double hessian = jet.phi_uu * q * q + jet.phi_vv + 2.0 * jet.phi_uv * q;
    const double bracket = jet.phi_u * q * ms.g2 - jet.phi_u * ms.g1 - lam / 6.0 * hessian * mom.i4 -
                           lam * (jet.phi_u * q + jet.phi_v) * ms.m2 + 2.0 * p.mu() * q * ms.m1;
    return 2.0 * cb * bracket / (jet.phi * lam);
}

std::string_view to_string(BranchType t) {
    return t == BranchType::transcritical ? "transcritical" : "pitchfork";
}

std::string_view to_string(BranchStability s) {
    switch (s) {
        case BranchStability::stable_positive_s: return "stable_s_positive";
        case BranchStability::stable_negative_s: return "stable_s_negative";
        case BranchStability::both_unstable: return "both_unstable";
        case BranchStability::stable_supercritical: return "stable_supercritical";
        case BranchStability::unstable_subcritical: return "unstable_subcritical";
        case BranchStability::undetermined: return "undetermined";
    }
    return "?";
}

BifurcationPoint classify_branch(const ModelParams& p, const Threshold& threshold, const Mode& mode) {
    BifurcationPoint bp;
    bp.mode = mode;
    bp.chi_bar = chi_bar(p, mode);
    bp.q = q_ratio(p, mode);
    bp.degenerate_warning = mode.multiplicity > 1;
    if (bp.degenerate_warning) {
        bp.warnings.push_back("eigenvalue has multiplicity " + std::to_string(mode.multiplicity) +
                              "; simple-eigenvalue hypothesis fails");
    }
    bp.is_minimizer = std::any_of(threshold.minimizers.begin(), threshold.minimizers.end(),
                                  [&](const Mode& k) { return k.same_indices(mode); });

    const ModeMoments mom = moments(mode);
    bp.chi_prime = chi_prime(p, mode, mom);
    if (std::abs(bp.chi_prime) > kSlopeTolerance) {
        bp.branch_type = BranchType::transcritical;
    } else {
        bp.branch_type = BranchType::pitchfork;
        try {
            bp.moment_solution = solve_moment_system(p, mode, mom);
            bp.chi_double_prime = chi_double_prime(p, mode, mom, *bp.moment_solution);
            if (!bp.moment_solution->closure_exact) {
                bp.warnings.push_back("moment closure is approximate for mixed modes");
            }
        } catch (const IllConditionedError& e) {
            bp.warnings.emplace_back(e.what());
        }
    }

    if (!bp.is_minimizer) {
        bp.predicted_stability = BranchStability::both_unstable;
    } else if (bp.branch_type == BranchType::transcritical) {
        bp.predicted_stability =
            bp.chi_prime > 0.0 ? BranchStability::stable_positive_s : BranchStability::stable_negative_s;
    } else if (bp.chi_double_prime && *bp.chi_double_prime > 0.0) {
        bp.predicted_stability = BranchStability::stable_supercritical;
    } else if (bp.chi_double_prime && *bp.chi_double_prime < 0.0) {
        bp.predicted_stability = BranchStability::unstable_subcritical;
    } else {
        bp.predicted_stability = BranchStability::undetermined;
    }
    return bp;
}

BifurcationPoint classify_branch(const ModelParams& p, const Domain& domain, const Mode& mode) {
    return classify_branch(p, chi_threshold(p, domain), mode);
}

double eigenvalue_drift(const ModelParams& p, const Mode& mode) {
    const Coefficients c = homogeneous_coefficients(p);
    const double lam = mode.lambda;
    return lam * c.fp * c.phi / ((p.d1() + p.d2()) * lam + p.mu() * p.ubar() + p.alpha());
}

BranchSeed::BranchSeed(const ModelParams& p, const Mode& mode, double s)
    : mode_(mode), base_(homogeneous_state(p)), s_(s), q_(q_ratio(p, mode)) {}

double BranchSeed::u(double x, double y) const { return base_.u + s_ * q_ * eval_mode(mode_, x, y); }

double BranchSeed::v(double x, double y) const { return base_.v + s_ * eval_mode(mode_, x, y); }

}  // namespace kschemo
