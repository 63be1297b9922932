#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kschemo/bifurcation.hpp"
#include "kschemo/errors.hpp"

using namespace kschemo;

namespace {

const Domain kUnitInterval = Domain::interval(std::numbers::pi);

struct Galerkin {
    double m1, g1, m2, g2;  // int Phi^2 psi1, int |grad Phi|^2 psi1, int Phi^2 psi2, int |grad Phi|^2 psi2
    double chi_double_prime;
};

// Independent second-order solve for a stripe mode cos(k x) on (0, L): the
// s^2 equations (psi1, psi2 orthogonal to Phi) are projected onto the two
// cosines they can excite, 1 and cos(2 k x), and chi'' follows from the
// bracket formula for pitchfork branches.
Galerkin galerkin_stripe(const ModelParams& p, double length, int m) {
    const double k = m * std::numbers::pi / length;
    const double lam = k * k;
    const HomogeneousState hs = homogeneous_state(p);
    const SensitivityJet jet = p.phi().jet(hs.u, hs.v);
    const double fp = p.f().first_derivative(hs.u);
    const double phi = jet.phi;
    const double cb = (p.d1() * lam + p.mu() * p.ubar()) * (p.d2() * lam + p.alpha()) / (fp * phi * lam);
    const double q = (p.d2() * lam + p.alpha()) / fp;
    const double cross = jet.phi_u * q + jet.phi_v;

    // Phi^2 = (1 + c2) / L, |grad Phi|^2 = lam (1 - c2) / L.
    const double a[2] = {1.0 / length, 1.0 / length};
    const double b[2] = {lam / length, -lam / length};
    const double big_lambda[2] = {0.0, 4.0 * lam};
    const double norm[2] = {length, 0.5 * length};  // int 1, int c2^2
    double pc[2], qc[2];
    for (int j = 0; j < 2; ++j) {
        const double a11 = -(p.d1() * big_lambda[j] + p.mu() * p.ubar());
        const double a12 = cb * phi * big_lambda[j];
        const double a21 = fp;
        const double a22 = -(p.d2() * big_lambda[j] + p.alpha());
        const double r1 = p.mu() * q * q * a[j] + cb * cross * (b[j] - lam * a[j]);
        const double det = a11 * a22 - a12 * a21;
        pc[j] = r1 * a22 / det;
        qc[j] = -a21 * r1 / det;
    }
    Galerkin g{};
    for (int j = 0; j < 2; ++j) {
        g.m1 += pc[j] * a[j] * norm[j];
        g.g1 += pc[j] * b[j] * norm[j];
        g.m2 += qc[j] * a[j] * norm[j];
        g.g2 += qc[j] * b[j] * norm[j];
    }
    const double i4 = 1.5 / length;
    const double hessian = jet.phi_uu * q * q + jet.phi_vv + 2.0 * jet.phi_uv * q;
    const double bracket = jet.phi_u * q * g.g2 - jet.phi_u * g.g1 - lam / 6.0 * hessian * i4 -
                           lam * cross * g.m2 + 2.0 * p.mu() * q * g.m1;
    g.chi_double_prime = 2.0 * cb * bracket / (phi * lam);
    return g;
}

void check_against_galerkin(const ModelParams& p, double length, int m) {
    const Mode mode = make_mode(Domain::interval(length), m);
    const ModeMoments mom = moments(mode);
    const MomentSolution ms = solve_moment_system(p, mode, mom);
    const Galerkin g = galerkin_stripe(p, length, m);
    CHECK(ms.residual <= 1e-10);
    CHECK(ms.closure_exact);
    const double scale = std::max({1.0, std::abs(g.m1), std::abs(g.g1), std::abs(g.m2), std::abs(g.g2)});
    CHECK(std::abs(ms.m1 - g.m1) <= 1e-8 * scale);
    CHECK(std::abs(ms.g1 - g.g1) <= 1e-8 * scale);
    CHECK(std::abs(ms.m2 - g.m2) <= 1e-8 * scale);
    CHECK(std::abs(ms.g2 - g.g2) <= 1e-8 * scale);
    const double cdd = chi_double_prime(p, mode, mom, ms);
    CHECK(std::abs(cdd - g.chi_double_prime) <= 1e-8 * std::max(1.0, std::abs(g.chi_double_prime)));
}

}  // namespace

TEST_SUITE("bifurcation") {

TEST_CASE("ladder oracle on the unit interval") {
    const ModelParams p = ModelParams::unit(0.0);
    // chi_bar_k = (k^2 + 1)^2 / k^2 and Q_k = k^2 + 1 for the unit setup.
    for (int k = 1; k <= 6; ++k) {
        const Mode mode = make_mode(kUnitInterval, k);
        const double l = static_cast<double>(k * k);
        CHECK(std::abs(chi_bar(p, mode) - (l + 1) * (l + 1) / l) <= 1e-12);
        CHECK(std::abs(q_ratio(p, mode) - (l + 1)) <= 1e-12);
    }
    CHECK(std::abs(chi_bar(p, make_mode(kUnitInterval, 1)) - 4.0) <= 1e-12);
    CHECK(std::abs(chi_bar(p, make_mode(kUnitInterval, 2)) - 6.25) <= 1e-12);
    const Threshold t = chi_threshold(p, kUnitInterval);
    CHECK(std::abs(t.chi0 - 4.0) <= 1e-12);
    REQUIRE(t.minimizers.size() == 1);
    CHECK(t.minimizers[0].m == 1);
    CHECK(t.lambda_star == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.lambda_cutoff >= 4.0 * t.lambda_star);
}

TEST_CASE("linearization and instability equivalence") {
    const Linearization lin = linearize(ModelParams::unit(5.0), make_mode(kUnitInterval, 1));
    CHECK(lin.dominant_rate() == doctest::Approx(-2.0 + std::sqrt(5.0)).epsilon(1e-14));
    CHECK(lin.trace == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(lin.det == doctest::Approx(-1.0).epsilon(1e-14));

    const Domain domain = Domain::rectangle(2.0, 1.0);
    for (double chi : {0.5, 2.0, 5.0, 11.0, 30.0}) {
        const ModelParams p(0.3, 0.05, chi, 2.0, 1.5, 1.0);
        for (const Mode& mode : enumerate_modes(domain, 400.0)) {
            const Linearization l = linearize(p, mode);
            CHECK((l.det < 0.0) == (chi > chi_bar(p, mode)));
            CHECK((l.dominant_rate() > 0.0) == (chi > chi_bar(p, mode)));
        }
    }
    const Linearization zero = linearize_at(ModelParams::unit(5.0), 0.0);
    CHECK(zero.h[0][1] == 0.0);
}

TEST_CASE("critical wavenumber minimizes the continuous ladder") {
    const ModelParams p(5.0, 0.01, 5.0, 1.0, 3.0, 1.0);
    const double ls = critical_wavenumber_squared(p);
    CHECK(ls == doctest::Approx(std::sqrt(3.0 / 0.05)).epsilon(1e-14));
    CHECK(chi_bar_at(p, ls) < chi_bar_at(p, 1.01 * ls));
    CHECK(chi_bar_at(p, ls) < chi_bar_at(p, 0.99 * ls));
}

TEST_CASE("degenerate and repulsive models") {
    const ModelParams vf(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, Sensitivity(SensitivityKind::volume_filling));
    CHECK_THROWS_AS(chi_bar(vf, make_mode(kUnitInterval, 1)), DegenerateModelError);
    CHECK_THROWS_AS(chi_threshold(vf, kUnitInterval), DegenerateModelError);
    const ModelParams over(1.0, 1.0, 1.0, 1.0, 2.0, 1.0, Sensitivity(SensitivityKind::volume_filling));
    CHECK_THROWS_AS(chi_threshold(over, kUnitInterval), DegenerateModelError);
}

TEST_CASE("collisions of bifurcation values") {
    // d1 d2 lambda_1 lambda_2 = alpha mu ubar with lambda = 1, 4.
    const ModelParams p(1.0, 1.0, 0.0, 4.0, 1.0, 1.0);
    const auto modes = enumerate_modes(kUnitInterval, 10.0);
    const auto hits = chi_collisions(p, modes);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].first.m == 1);
    CHECK(hits[0].second.m == 2);
    CHECK(chi_bar(p, modes[0]) == doctest::Approx(chi_bar(p, modes[1])).epsilon(1e-14));
    CHECK(chi_collisions(ModelParams::unit(0.0), modes).empty());
}

TEST_CASE("cosine modes give pitchfork branches") {
    const ModelParams p(5.0, 0.01, 5.0, 1.0, 3.0, 1.0);
    for (const Mode& mode : enumerate_modes(Domain::square(1.0), 200.0)) {
        CHECK(std::abs(chi_prime(p, mode, moments(mode))) <= kSlopeTolerance);
        CHECK(classify_branch(p, Domain::square(1.0), mode).branch_type == BranchType::pitchfork);
    }
}

TEST_CASE("moment system and chi'' agree with an independent Galerkin solve") {
    SUBCASE("unit setup") { check_against_galerkin(ModelParams::unit(0.0), std::numbers::pi, 1); }
    SUBCASE("unit setup, second mode") { check_against_galerkin(ModelParams::unit(0.0), std::numbers::pi, 2); }
    SUBCASE("fig2 parameters") { check_against_galerkin(ModelParams(5.0, 0.01, 5.0, 1.0, 3.0, 1.0), 1.0, 1); }
    SUBCASE("volume filling") {
        const ModelParams p(0.2, 0.5, 1.0, 2.0, 0.3, 1.5, Sensitivity(SensitivityKind::volume_filling),
                            Kinetics::affine_linear(2.0));
        check_against_galerkin(p, 3.0, 2);
    }
    SUBCASE("constant sensitivity") {
        check_against_galerkin(ModelParams(1.0, 2.0, 1.0, 1.0, 2.0, 1.0, Sensitivity(SensitivityKind::constant)),
                               2.0, 1);
    }
}

TEST_CASE("branch classification of the unit ladder") {
    const ModelParams p = ModelParams::unit(0.0);
    const BifurcationPoint k1 = classify_branch(p, kUnitInterval, make_mode(kUnitInterval, 1));
    CHECK(k1.is_minimizer);
    CHECK(k1.branch_type == BranchType::pitchfork);
    REQUIRE(k1.chi_double_prime.has_value());
    CHECK(k1.predicted_stability ==
          (*k1.chi_double_prime > 0 ? BranchStability::stable_supercritical : BranchStability::unstable_subcritical));
    const BifurcationPoint k2 = classify_branch(p, kUnitInterval, make_mode(kUnitInterval, 2));
    CHECK_FALSE(k2.is_minimizer);
    CHECK(k2.predicted_stability == BranchStability::both_unstable);

    const Mode square10 = enumerate_modes(Domain::square(1.0), 10.0).at(1);
    CHECK(square10.multiplicity == 2);
    CHECK(classify_branch(p, Domain::square(1.0), square10).degenerate_warning);
}

TEST_CASE("second-order analytics reject transcritical requests and bad models") {
    // The unit setup has mu Q^2 = lambda chi_bar phi_u Q / 2, so use fig2 constants.
    const ModelParams p(5.0, 0.01, 5.0, 1.0, 3.0, 1.0);
    const Mode mode = make_mode(Domain::square(1.0), 1, 0);
    ModeMoments fake = moments(mode);
    fake.i3 = 0.5;
    fake.i_grad = 0.25 * mode.lambda;
    CHECK(std::abs(chi_prime(p, mode, fake)) > kSlopeTolerance);
    CHECK_THROWS_AS(solve_moment_system(p, mode, fake), BranchTypeError);
    const MomentSolution ms = solve_moment_system(p, mode, moments(mode));
    CHECK_THROWS_AS(chi_double_prime(p, mode, fake, ms), BranchTypeError);
}

TEST_CASE("eigenvalue drift matches a finite difference of the dominant rate") {
    for (const ModelParams& base : {ModelParams::unit(0.0), ModelParams(5.0, 0.01, 0.0, 1.0, 3.0, 1.0)}) {
        for (int m = 1; m <= 3; ++m) {
            const Mode mode = make_mode(Domain::interval(std::numbers::pi), m);
            const double cb = chi_bar(base, mode);
            const double h = 1e-6 * cb;
            const double fd = (linearize(base.with_chi(cb + h), mode).dominant_rate() -
                               linearize(base.with_chi(cb - h), mode).dominant_rate()) /
                              (2 * h);
            CHECK(eigenvalue_drift(base, mode) == doctest::Approx(fd).epsilon(1e-6));
            CHECK(std::abs(linearize(base.with_chi(cb), mode).dominant_rate()) <= 1e-12 * cb);
        }
    }
}

TEST_CASE("branch seed is the first-order branch") {
    const ModelParams p = ModelParams::unit(4.0);
    const Mode mode = make_mode(kUnitInterval, 1);
    const BranchSeed seed(p, mode, 0.01);
    CHECK(seed.q() == doctest::Approx(2.0));
    const double x = 0.4;
    CHECK(seed.u(x) - 1.0 == doctest::Approx(0.02 * eval_mode(mode, x)).epsilon(1e-13));
    CHECK(seed.v(x) - 1.0 == doctest::Approx(0.01 * eval_mode(mode, x)).epsilon(1e-13));
}

}
