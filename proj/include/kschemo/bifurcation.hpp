#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kschemo/eigenbasis.hpp"
#include "kschemo/model.hpp"

namespace kschemo {

/// Slopes below this magnitude classify a branch as a pitchfork.
inline constexpr double kSlopeTolerance = 1e-10;

/// 2x2 linearization of the kinetics-transport system about the homogeneous
/// state, restricted to one Neumann mode:
///   H = [[-d1 lambda - mu ubar,  chi phi lambda],
///        [ f'(ubar),            -d2 lambda - alpha]]
/// `trace` is the true matrix trace (negative); growth rates are the roots of
/// sigma^2 - trace sigma + det, ordered by real part descending.
struct Linearization {
    double lambda = 0.0;
    std::array<std::array<double, 2>, 2> h{};
    double trace = 0.0;
    double det = 0.0;
    std::array<std::complex<double>, 2> growth_rates{};

    double dominant_rate() const { return growth_rates[0].real(); }
};

Linearization linearize(const ModelParams& p, const Mode& mode);
/// Same matrix at an arbitrary eigenvalue; lambda == 0 gives the decoupled
/// zero-mode diagnostic.
Linearization linearize_at(const ModelParams& p, double lambda);

/// chi_bar = (d1 lambda + mu ubar)(d2 lambda + alpha) / (f'(ubar) phi(ubar, vbar) lambda).
/// Throws DegenerateModelError when f'(ubar) phi(ubar, vbar) == 0.
double chi_bar(const ModelParams& p, const Mode& mode);
double chi_bar_at(const ModelParams& p, double lambda);

/// Q = (d2 lambda + alpha) / f'(ubar): u:v amplitude ratio of the null vector.
double q_ratio(const ModelParams& p, const Mode& mode);

/// Continuous minimizer of chi_bar over lambda: sqrt(alpha mu ubar / (d1 d2)).
double critical_wavenumber_squared(const ModelParams& p);

struct Threshold {
    double chi0 = 0.0;
    std::vector<Mode> minimizers;  // all modes attaining chi0 (relative 1e-12)
    double lambda_star = 0.0;
    double lambda_cutoff = 0.0;    // modes with lambda <= cutoff were searched
};

/// chi0 = min over modes of chi_bar. Requires f'(ubar) phi(ubar, vbar) > 0.
Threshold chi_threshold(const ModelParams& p, const Domain& domain);

/// Eigenvalue pairs violating d1 d2 lambda_i lambda_j != alpha mu ubar, which
/// would make two bifurcation values coincide.
std::vector<std::pair<Mode, Mode>> chi_collisions(const ModelParams& p, const std::vector<Mode>& modes);

/// Branch slope chi'_k(0). Throws BranchAssumptionError if the model fails
/// validate_for_branch_analytics.
double chi_prime(const ModelParams& p, const Mode& mode, const ModeMoments& mom);

/// Projections of the second-order corrections psi1, psi2 onto Phi^2 and |grad Phi|^2.
struct MomentSolution {
    double m1 = 0.0;  // int Phi^2 psi1
    double g1 = 0.0;  // int |grad Phi|^2 psi1
    double m2 = 0.0;  // int Phi^2 psi2
    double g2 = 0.0;  // int |grad Phi|^2 psi2
    double condition = 0.0;  // 1-norm condition number of the 4x4 matrix
    double residual = 0.0;   // relative residual of the solve
    /// The 4x4 closure uses lap |grad Phi|^2 = 2 lambda^2 Phi^2 - 2 lambda |grad Phi|^2,
    /// which holds for single-axis cosines but not for mixed (m, n >= 1) modes.
    bool closure_exact = true;
};

/// Builds and solves the 4x4 system for the moments. Requires chi'_k(0) = 0;
/// throws IllConditionedError if the matrix is singular or its condition
/// exceeds 1e12.
MomentSolution solve_moment_system(const ModelParams& p, const Mode& mode, const ModeMoments& mom);

/// chi''_k(0) from the moments. Throws BranchTypeError when chi'_k(0) != 0.
double chi_double_prime(const ModelParams& p, const Mode& mode, const ModeMoments& mom,
                        const MomentSolution& ms);

enum class BranchType { transcritical, pitchfork };
enum class BranchStability {
    stable_positive_s,     // chi' > 0
    stable_negative_s,     // chi' < 0
    both_unstable,         // not the minimizing mode
    stable_supercritical,  // pitchfork, chi'' > 0
    unstable_subcritical,  // pitchfork, chi'' < 0
    undetermined,          // pitchfork with chi'' unavailable or zero
};

std::string_view to_string(BranchType t);
std::string_view to_string(BranchStability s);

struct BifurcationPoint {
    Mode mode;
    double chi_bar = 0.0;
    double q = 0.0;
    double chi_prime = 0.0;
    std::optional<double> chi_double_prime;  // only for pitchfork branches
    std::optional<MomentSolution> moment_solution;
    BranchType branch_type = BranchType::pitchfork;
    BranchStability predicted_stability = BranchStability::undetermined;
    bool is_minimizer = false;
    bool degenerate_warning = false;  // eigenvalue multiplicity > 1
    std::vector<std::string> warnings;
};

/// Classifies the branch emanating at chi_bar of `mode` using the threshold of `domain`.
BifurcationPoint classify_branch(const ModelParams& p, const Domain& domain, const Mode& mode);
BifurcationPoint classify_branch(const ModelParams& p, const Threshold& threshold, const Mode& mode);

/// Derivative of the critical eigenvalue with respect to chi at chi_bar:
/// lambda f'(ubar) phi / ((d1 + d2) lambda + mu ubar + alpha).
double eigenvalue_drift(const ModelParams& p, const Mode& mode);

/// First-order branch approximation (ubar, vbar) + s (Q, 1) Phi_k.
class BranchSeed {
public:
    BranchSeed(const ModelParams& p, const Mode& mode, double s);

    double u(double x, double y = 0.0) const;
    double v(double x, double y = 0.0) const;

    const Mode& mode() const { return mode_; }
    double amplitude() const { return s_; }
    double q() const { return q_; }

private:
    Mode mode_;
    HomogeneousState base_;
    double s_;
    double q_;
};

inline BranchSeed branch_seed(const ModelParams& p, const Mode& mode, double s) {
    return BranchSeed(p, mode, s);
}

}  // namespace kschemo
