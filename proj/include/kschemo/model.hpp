#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kschemo {

enum class SensitivityKind { linear, volume_filling, constant };
enum class KineticsKind { linear, affine_linear };

std::string_view to_string(SensitivityKind kind);
std::string_view to_string(KineticsKind kind);
SensitivityKind parse_sensitivity_kind(std::string_view text);  // throws ParameterError
KineticsKind parse_kinetics_kind(std::string_view text);         // throws ParameterError

/// phi and its partials up to second order at one point.
struct SensitivityJet {
    double phi = 0.0;
    double phi_u = 0.0;
    double phi_v = 0.0;
    double phi_uu = 0.0;
    double phi_uv = 0.0;
    double phi_vv = 0.0;
};

/// Chemotactic sensitivity phi(u, v) from a closed set of families with exact
/// derivatives:
///   linear          phi = u
///   volume_filling  phi = u (1 - u)   (positive only for 0 < u < 1)
///   constant        phi = 1
class Sensitivity {
public:
    constexpr Sensitivity() = default;
    constexpr explicit Sensitivity(SensitivityKind kind) : kind_(kind) {}

    constexpr SensitivityKind kind() const { return kind_; }

    constexpr double value(double u, double /*v*/) const {
        switch (kind_) {
            case SensitivityKind::linear: return u;
            case SensitivityKind::volume_filling: return u * (1.0 - u);
            case SensitivityKind::constant: return 1.0;
        }
        return 0.0;
    }

    SensitivityJet jet(double u, double v) const;

    friend bool operator==(const Sensitivity&, const Sensitivity&) = default;

private:
    SensitivityKind kind_ = SensitivityKind::linear;
};

/// Chemical production f(u): linear (f = u) or affine_linear (f = beta u, beta > 0).
class Kinetics {
public:
    constexpr Kinetics() = default;
    static Kinetics linear() { return Kinetics(KineticsKind::linear, 1.0); }
    static Kinetics affine_linear(double beta);  // throws ParameterError unless beta > 0

    KineticsKind kind() const { return kind_; }
    double beta() const { return beta_; }

    double value(double u) const { return beta_ * u; }
    double first_derivative(double /*u*/) const { return beta_; }
    double second_derivative(double /*u*/) const { return 0.0; }

    friend bool operator==(const Kinetics&, const Kinetics&) = default;

private:
    Kinetics(KineticsKind kind, double beta) : kind_(kind), beta_(beta) {}

    KineticsKind kind_ = KineticsKind::linear;
    double beta_ = 1.0;
};

/// Constants of the logistic Keller-Segel system
///   u_t = div(d1 grad u - chi phi(u,v) grad v) + mu u (ubar - u)
///   v_t = d2 lap v - alpha v + f(u)
/// Every instance satisfies d1, d2, ubar, alpha > 0 and mu >= 0 (mu = 0 switches
/// growth off and makes the mass of u a conserved quantity); the constructor throws
/// ParameterError otherwise. chi may take any finite sign.
class ModelParams {
public:
    ModelParams(double d1, double d2, double chi, double mu, double ubar, double alpha,
                Sensitivity phi = Sensitivity{}, Kinetics f = Kinetics::linear());

    /// D1 = D2 = mu = ubar = alpha = 1, phi = u, f = u with the given chi.
    static ModelParams unit(double chi);

    double d1() const { return d1_; }
    double d2() const { return d2_; }
    double chi() const { return chi_; }
    double mu() const { return mu_; }
    double ubar() const { return ubar_; }
    double alpha() const { return alpha_; }
    const Sensitivity& phi() const { return phi_; }
    const Kinetics& f() const { return f_; }

    ModelParams with_chi(double chi) const;
    ModelParams with_d1(double d1) const;
    ModelParams with_d2(double d2) const;
    ModelParams with_mu(double mu) const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double d1_, d2_, chi_, mu_, ubar_, alpha_;
    Sensitivity phi_;
    Kinetics f_;
};

struct HomogeneousState {
    double u;
    double v;
};

/// (ubar, f(ubar)/alpha).
HomogeneousState homogeneous_state(const ModelParams& p);

/// Smoothness facts the second-order branch analytics rely on.
struct BranchAssumptions {
    double f_second_derivative = 0.0;  // f''(ubar)
    bool sensitivity_c2 = true;        // phi is C^2 near (ubar, vbar)
};

BranchAssumptions branch_assumptions(const ModelParams& p);

/// Empty when the analytics apply; otherwise one message per violated assumption.
std::vector<std::string> validate_for_branch_analytics(const BranchAssumptions& a);
std::vector<std::string> validate_for_branch_analytics(const ModelParams& p);

}  // namespace kschemo
