#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bllimit/grid.hpp"
#include "bllimit/quadrature.hpp"

using namespace bll;

TEST_CASE("rescaling map anchors") {
    const DomainScaling sc{2.0, 0.1};
    const double H = 2.0 * 0.1;
    CHECK(sc.to_s(1.0) == 0.5);
    CHECK(sc.to_tau(H) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sc.scale_u(-4.0) == -2.0);
    CHECK(sc.unscale_u(sc.scale_u(-4.0)) == -4.0);
    CHECK(sc.unscale_v(sc.scale_v(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("round trip on random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const DomainScaling sc{1.7, 0.13};
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double x = d(rng) * 1.7, y = d(rng) * 0.3;
        worst = std::max({worst, std::abs(sc.to_x(sc.to_s(x)) - x), std::abs(sc.to_y(sc.to_tau(y)) - y)});
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("L2 norm scaling between the physical and rescaled domains") {
    CurveDescriptor d;
    d.length = 2.0;
    d.delta = 0.05;
    d.height = 0.3;
    const HeightCurve curve = build_height_curve(d);
    const RescaledDomain dom = rescale_domain(curve, 65, 33);
    const DomainScaling sc = dom.scaling;
    auto u = [](double x, double y) { return std::cos(x) * y + 3.0 - x * x * y; };
    // ||u||^2 on Omega_h
    const double phys = integrate_gk15(
                            [&](double x) {
                                return integrate_gk15([&](double y) { return u(x, y) * u(x, y); }, 0.0, curve(x),
                                                      1e-14)
                                    .value;
                            },
                            0.0, curve.length(), 1e-13)
                            .value;
    // ||u_eps||^2 on Omega_eps, u_eps(s, tau) = u(x, y) / L
    const double resc = integrate_gk15(
                            [&](double s) {
                                return integrate_gk15(
                                           [&](double t) {
                                               const double ue = sc.scale_u(u(sc.to_x(s), sc.to_y(t)));
                                               return ue * ue;
                                           },
                                           0.0, dom.grid->roof(s), 1e-15)
                                    .value;
                            },
                            0.0, 1.0, 1e-15)
                            .value;
    CHECK(std::abs(phys - sc.l2_sq_factor() * resc) / phys <= 1e-10);
    CHECK(sc.l2_sq_factor() == doctest::Approx(16.0 * 0.15).epsilon(1e-15));
}

TEST_CASE("grid construction") {
    const HeightCurve curve = build_height_curve({});
    const auto g = Grid2D::from_curve(curve, 65, 33);
    CHECK(g->n_s() == 65);
    CHECK(g->s(0) == 0.0);
    CHECK(g->s(64) == 1.0);
    CHECK(g->h(64) == g->h(0));
    CHECK(g->h(0) == doctest::Approx(0.5).epsilon(1e-14));  // delta / H
    CHECK(g->h(32) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g->epsilon() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(g->tau(32, 32) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g->crest_s() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle::kind_of([&] { Grid2D::from_curve(curve, 2, 33); }) == ErrorKind::GridTooCoarse);
    CHECK(oracle::kind_of([&] { Grid2D::from_curve(curve, 9, 4); }) == ErrorKind::GridTooCoarse);
    CHECK(oracle::kind_of([&] { Grid2D::flat(1.0, 0.0, 9, 9); }) == ErrorKind::NonPositiveLength);
}

TEST_CASE("field storage and trapezoid integral") {
    const auto flat = Grid2D::flat(1.0, 0.1, 11, 21);
    Field2D f(flat, 2.0);
    CHECK(integrate_field(f) == doctest::Approx(2.0).epsilon(1e-14));
    f(3, 4) = -7.0;
    CHECK(f.values()[flat->index(3, 4)] == -7.0);
    CHECK(f.column(3)[4] == -7.0);
    CHECK(f.max_abs() == 7.0);
    CHECK(f.all_finite());
    f(0, 0) = std::nan("");
    CHECK_FALSE(f.all_finite());

    const auto curved = Grid2D::from_curve(build_height_curve({}), 257, 9);
    // area of the rescaled parabolic domain: int_0^1 (0.5 + 2 s (1 - s)) ds = 5/6
    CHECK(integrate_field(Field2D(curved, 1.0)) == doctest::Approx(5.0 / 6.0).epsilon(1e-5));
    Field2D other(Grid2D::flat(1.0, 0.1, 11, 21));
    CHECK(oracle::kind_of([&] { require_same_grid(f, other, "t"); }) == std::nullopt);
    Field2D third(curved);
    CHECK(oracle::kind_of([&] { require_same_grid(f, third, "t"); }) == ErrorKind::GridMismatch);
}
