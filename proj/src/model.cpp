#include "kschemo/model.hpp"

#include <cmath>
#include <string>

#include "kschemo/errors.hpp"

namespace kschemo {

std::string_view to_string(SensitivityKind kind) {
    switch (kind) {
        case SensitivityKind::linear: return "linear";
        case SensitivityKind::volume_filling: return "volume_filling";
        case SensitivityKind::constant: return "constant";
    }
    return "?";
}

std::string_view to_string(KineticsKind kind) {
    switch (kind) {
        case KineticsKind::linear: return "linear";
        case KineticsKind::affine_linear: return "affine_linear";
    }
    return "?";
}

SensitivityKind parse_sensitivity_kind(std::string_view text) {
    if (text == "linear") return SensitivityKind::linear;
    if (text == "volume_filling") return SensitivityKind::volume_filling;
    if (text == "constant") return SensitivityKind::constant;
    throw ParameterError("unknown sensitivity family '" + std::string(text) + "'");
}

KineticsKind parse_kinetics_kind(std::string_view text) {
    if (text == "linear") return KineticsKind::linear;
    if (text == "affine_linear") return KineticsKind::affine_linear;
    throw ParameterError("unknown kinetics family '" + std::string(text) + "'");
}

SensitivityJet Sensitivity::jet(double u, double v) const {
    SensitivityJet j;
    j.phi = value(u, v);
    switch (kind_) {
        case SensitivityKind::linear:
            j.phi_u = 1.0;
            break;
        case SensitivityKind::volume_filling:
            j.phi_u = 1.0 - 2.0 * u;
            j.phi_uu = -2.0;
            break;
        case SensitivityKind::constant:
            break;
    }
    return j;
}

Kinetics Kinetics::affine_linear(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ParameterError("kinetics beta must be positive");
    }
    return Kinetics(KineticsKind::affine_linear, beta);
}

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ParameterError(std::string(name) + " must be positive");
    }
}

void require_nonnegative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw ParameterError(std::string(name) + " must be nonnegative");
    }
}

}  // namespace

ModelParams::ModelParams(double d1, double d2, double chi, double mu, double ubar, double alpha,
                         Sensitivity phi, Kinetics f)
    : d1_(d1), d2_(d2), chi_(chi), mu_(mu), ubar_(ubar), alpha_(alpha), phi_(phi), f_(f) {
    require_positive(d1, "d1");
    require_positive(d2, "d2");
    require_nonnegative(mu, "mu");
    require_positive(ubar, "ubar");
    require_positive(alpha, "alpha");
    if (!std::isfinite(chi)) throw ParameterError("chi must be finite");
}

ModelParams ModelParams::unit(double chi) { return ModelParams(1.0, 1.0, chi, 1.0, 1.0, 1.0); }

ModelParams ModelParams::with_chi(double chi) const {
    return ModelParams(d1_, d2_, chi, mu_, ubar_, alpha_, phi_, f_);
}
ModelParams ModelParams::with_d1(double d1) const {
    return ModelParams(d1, d2_, chi_, mu_, ubar_, alpha_, phi_, f_);
}
ModelParams ModelParams::with_d2(double d2) const {
    return ModelParams(d1_, d2, chi_, mu_, ubar_, alpha_, phi_, f_);
}
ModelParams ModelParams::with_mu(double mu) const {
    return ModelParams(d1_, d2_, chi_, mu, ubar_, alpha_, phi_, f_);
}

HomogeneousState homogeneous_state(const ModelParams& p) {
    return {p.ubar(), p.f().value(p.ubar()) / p.alpha()};
}

BranchAssumptions branch_assumptions(const ModelParams& p) {
    // All provided sensitivity families are polynomials, hence smooth everywhere.
    return {p.f().second_derivative(p.ubar()), true};
}

std::vector<std::string> validate_for_branch_analytics(const BranchAssumptions& a) {
    std::vector<std::string> violations;
    if (a.f_second_derivative != 0.0) {
        violations.emplace_back("second-order kinetics term unmodeled (f''(ubar) != 0)");
    }
    if (!a.sensitivity_c2) {
        violations.emplace_back("sensitivity is not C^2 at the homogeneous state");
    }
    return violations;
}

std::vector<std::string> validate_for_branch_analytics(const ModelParams& p) {
    return validate_for_branch_analytics(branch_assumptions(p));
}

}  // namespace kschemo
