// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "planewave/bessel.hpp"
#include "planewave/errors.hpp"
#include "planewave/geometry.hpp"

using namespace pw;

static const MediumParams kMedium = MediumParams::from_lambda(1.0, 1.0);

TEST_CASE("medium from wavelength") {
    CHECK(kMedium.kappa == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK_THROWS_AS(MediumParams::from_lambda(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(MediumParams::from_lambda(1.0, -1.0), ConfigError);
}

TEST_CASE("bessel J0 and Y0 reference values") {
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-12));
    CHECK(bessel_y0(1.0) == doctest::Approx(0.08825696421567696).epsilon(1e-10));
    CHECK(bessel_j0(10.0) == doctest::Approx(-0.2459357644513483).epsilon(1e-9));
    CHECK(bessel_y0(10.0) == doctest::Approx(0.05567116728359939).epsilon(1e-7));
    // first zero of J0
    CHECK(bessel_j0(2.404825557695773) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("longitudinal wavenumber branches") {
    const double k = kMedium.kappa;
    auto g = gamma_of(0.6 * k, 0.0, kMedium);
    REQUIRE(g.has_value());
    CHECK(*g == doctest::Approx(0.8 * k).epsilon(1e-14));
    CHECK_FALSE(gamma_of(1.1 * k, 0.3 * k, kMedium).has_value());

    const cplx kz = kappa_z(1.25 * k, 0.0, kMedium);
    CHECK(kz.real() == 0.0);
    CHECK(kz.imag() == doctest::Approx(0.75 * k).epsilon(1e-14));

    const cplx r = kappa_z_sqrt(0.6 * k, 0.0, kMedium);
    CHECK(std::norm(r * r - kappa_z(0.6 * k, 0.0, kMedium)) < 1e-20);
    const cplx re = kappa_z_sqrt(1.25 * k, 0.0, kMedium);
    CHECK(std::abs(re * re - kappa_z(1.25 * k, 0.0, kMedium)) < 1e-12);
}

TEST_CASE("direction cosine round trip") {
    const SphericalAngles a{0.7, 2.1};
    const Direction3 d = spherical_to_cosine(a);
    const SphericalAngles b = cosine_to_spherical(d.x, d.y);
    CHECK(b.theta == doctest::Approx(a.theta).epsilon(1e-12));
    CHECK(b.phi == doctest::Approx(a.phi).epsilon(1e-12));
    CHECK(d.x * d.x + d.y * d.y + d.z * d.z == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hemisphere_jacobian(0.7) ==
          doctest::Approx(std::cos(0.7) * std::sin(0.7)).epsilon(1e-15));
    CHECK_THROWS_AS(cosine_to_spherical(1.2, 0.3), ConfigError);
}

TEST_CASE("plane wave responses") {
    const double k = kMedium.kappa;
    const WaveVector w = make_wave(0.6 * k, 0.0, kMedium);
    const SpatialPoint s{0.3, -0.2, 0.4};
    // propagating waves are unimodular
    CHECK(std::abs(plane_wave_source(w, s)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(plane_wave_receive(w, s)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(plane_wave_receive(w, s) -
                   std::conj(plane_wave_source(w, s))) < 1e-15);

    // evanescent source response grows above the source plane; the checked
    // variant flags that as unphysical
    const WaveVector we = make_wave(1.25 * k, 0.0, kMedium);
    const cplx up = plane_wave_source(we, {0.0, 0.0, 0.5});
    CHECK(std::abs(up) == doctest::Approx(std::exp(0.75 * k * 0.5)).epsilon(1e-12));
    CHECK(plane_wave_source_checked(we, {0.0, 0.0, 0.5}).growing);
    CHECK_FALSE(plane_wave_source_checked(we, {0.0, 0.0, -0.5}).growing);
    CHECK(plane_wave_receive_checked(we, {0.0, 0.0, -0.5}).growing);
}

TEST_CASE("scalar green functions") {
    const SpatialPoint p{0.3, 0.0, 0.4};
    const cplx g = green3(p, kMedium);
    CHECK(std::abs(g) == doctest::Approx(1.0 / (4.0 * pi * 0.5)).epsilon(1e-13));
    CHECK(std::arg(g) ==
          doctest::Approx(std::remainder(kMedium.kappa * 0.5, 2.0 * pi)).epsilon(1e-12));
    CHECK_THROWS_AS(green3({0, 0, 0}, kMedium), ConfigError);

    // kappa*R = 1: (i/4)*(J0(1) + i*Y0(1))
    const double R = 1.0 / kMedium.kappa;
    const cplx g2 = green2(R, 0.0, kMedium);
    CHECK(g2.real() == doctest::Approx(-0.08825696421567696 / 4.0).epsilon(1e-9));
    CHECK(g2.imag() == doctest::Approx(0.7651976865579666 / 4.0).epsilon(1e-11));
}

TEST_CASE("far field green approaches the exact kernel") {
    const SpatialPoint s{0.2, 0.1, 0.0};
    double prev = 1e9;
    for (double d : {5.0, 20.0, 500.0}) {
        const SpatialPoint r{d, 0.0, 0.0};
        const cplx exact = green3(r - s, kMedium);
        const double err = std::abs(far_field_green(r, s, kMedium) - exact) /
                           std::abs(exact);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}
