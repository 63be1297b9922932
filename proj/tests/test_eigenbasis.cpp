#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "kschemo/eigenbasis.hpp"
#include "kschemo/errors.hpp"

using namespace kschemo;

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

struct Rule {
    std::vector<double> x, w;
};

Rule composite(double length, int panels) {
    Rule r;
    const double h = length / panels;
    for (int p = 0; p < panels; ++p) {
        for (int k = 0; k < 8; ++k) {
            r.x.push_back((p + 0.5) * h + 0.5 * h * kNodes[k]);
            r.w.push_back(0.5 * h * kWeights[k]);
        }
    }
    return r;
}

struct Quadrature {
    double i1 = 0, i2 = 0, i3 = 0, i4 = 0, i_grad = 0;
};

// Independent evaluation: the mode and its gradient are written out here
// rather than taken from the library.
Quadrature integrate_square(int m, int n) {
    const Rule r = composite(1.0, 16);
    const double km = m * std::numbers::pi, kn = n * std::numbers::pi;
    const double c = (m == 0 ? 1.0 : std::sqrt(2.0)) * (n == 0 ? 1.0 : std::sqrt(2.0));
    Quadrature q;
    for (std::size_t a = 0; a < r.x.size(); ++a) {
        for (std::size_t b = 0; b < r.x.size(); ++b) {
            const double w = r.w[a] * r.w[b];
            const double x = r.x[a], y = r.x[b];
            const double phi = c * std::cos(km * x) * std::cos(kn * y);
            const double gx = -c * km * std::sin(km * x) * std::cos(kn * y);
            const double gy = -c * kn * std::cos(km * x) * std::sin(kn * y);
            q.i1 += w * phi;
            q.i2 += w * phi * phi;
            q.i3 += w * phi * phi * phi;
            q.i4 += w * phi * phi * phi * phi;
            q.i_grad += w * phi * (gx * gx + gy * gy);
        }
    }
    return q;
}

}  // namespace

TEST_SUITE("eigenbasis") {

TEST_CASE("enumeration on the unit interval and square") {
    const auto modes1 = enumerate_modes(Domain::interval(std::numbers::pi), 10.0);
    REQUIRE(modes1.size() == 3);
    CHECK(modes1[0].m == 1);
    CHECK(modes1[0].lambda == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(modes1[2].lambda == doctest::Approx(9.0).epsilon(1e-15));

    const auto modes2 = enumerate_modes(Domain::square(1.0), 2.5 * std::numbers::pi * std::numbers::pi);
    REQUIRE(modes2.size() == 3);
    CHECK(modes2[0].m == 0);
    CHECK(modes2[0].n == 1);
    CHECK(modes2[0].multiplicity == 2);
    CHECK(modes2[1].m == 1);
    CHECK(modes2[2].m == 1);
    CHECK(modes2[2].n == 1);
    CHECK(modes2[2].multiplicity == 1);
}

TEST_CASE("invalid modes and points are rejected") {
    CHECK_THROWS_AS(make_mode(Domain::square(1.0), 0, 0), ParameterError);
    CHECK_THROWS_AS(make_mode(Domain::interval(1.0), 1, 1), ParameterError);
    CHECK_THROWS_AS(make_mode(Domain::interval(1.0), -1), ParameterError);
    CHECK_THROWS_AS(eval_mode(make_mode(Domain::interval(1.0), 1), 1.5), DomainError);
}

TEST_CASE("quadrature identities for every mode with lambda <= 200 on the unit square") {
    const auto modes = enumerate_modes(Domain::square(1.0), 200.0);
    REQUIRE(modes.size() >= 20);
    for (const Mode& mode : modes) {
        CAPTURE(mode.m);
        CAPTURE(mode.n);
        const Quadrature q = integrate_square(mode.m, mode.n);
        const ModeMoments mom = moments(mode);
        CHECK(std::abs(q.i2 - 1.0) <= 1e-12);
        CHECK(std::abs(q.i1) <= 1e-12);
        CHECK(std::abs(q.i3) <= 1e-10);
        CHECK(std::abs(q.i_grad - 0.5 * mode.lambda * q.i3) <= 1e-8);
        CHECK(std::abs(mom.i2 - 1.0) <= 1e-12);
        CHECK(std::abs(mom.i3 - q.i3) <= 1e-10);
        CHECK(std::abs(mom.i4 - q.i4) <= 1e-10);
        CHECK(std::abs(mom.i_grad - q.i_grad) <= 1e-8);
        // The library's point evaluation agrees with the independent formula.
        const double c = (mode.m == 0 ? 1.0 : std::sqrt(2.0)) * (mode.n == 0 ? 1.0 : std::sqrt(2.0));
        CHECK(eval_mode(mode, 0.3, 0.7) ==
              doctest::Approx(c * std::cos(mode.m * std::numbers::pi * 0.3) *
                              std::cos(mode.n * std::numbers::pi * 0.7))
                  .epsilon(1e-14));
    }
    const Quadrature q11 = integrate_square(1, 1);
    CHECK(std::abs(q11.i4 - 2.25) <= 1e-10);
    CHECK(std::abs(moments(make_mode(Domain::square(1.0), 1, 1)).i4 - 2.25) <= 1e-12);
}

TEST_CASE("interval moments: int Phi^3 vanishes, int Phi^4 = 3 / (2 L)") {
    for (double length : {1.0, std::numbers::pi, 7.5}) {
        for (int m = 1; m <= 4; ++m) {
            const ModeMoments mom = moments(make_mode(Domain::interval(length), m));
            CHECK(std::abs(mom.i3) <= 1e-14);
            CHECK(mom.i4 == doctest::Approx(1.5 / length).epsilon(1e-13));
        }
    }
}

TEST_CASE("discrete projection recovers modal coefficients exactly") {
    const Grid grid(Domain::rectangle(2.0, 1.0), 32, 16);
    const Mode a = make_mode(grid.domain(), 3, 1);
    const Mode b = make_mode(grid.domain(), 0, 2);
    const auto sa = sample_mode(grid, a);
    const auto sb = sample_mode(grid, b);
    std::vector<double> field(grid.size());
    for (std::size_t k = 0; k < field.size(); ++k) field[k] = 4.0 + 0.25 * sa[k] - 1.5 * sb[k];
    CHECK(project(grid, field, a) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(project(grid, field, b) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(std::abs(project(grid, field, make_mode(grid.domain(), 1, 1))) <= 1e-12);
    CHECK(project_constant(grid, field) == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(project(Grid(grid.domain(), 16, 16), field, a), ShapeError);
}

}
