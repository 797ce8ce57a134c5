// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "planewave/errors.hpp"
#include "planewave/spectral_support.hpp"

using namespace pw;

static const MediumParams kMedium = MediumParams::from_lambda(1.0, 1.0);

TEST_CASE("isotropic bandwidth and DoF constants") {
    const double k = kMedium.kappa;
    CHECK(std::fabs(bandwidth_isotropic(kMedium) / (pi * k * k) - 1.0) < 1e-12);
    CHECK(std::fabs(dof_planar_loss_ratio() / (pi / 4.0) - 1.0) < 1e-12);
    const double omega = bandwidth_isotropic(kMedium);
    CHECK(dof_segment(omega, 3.0) ==
          doctest::Approx(omega * 3.0 / pi).epsilon(1e-14));
    CHECK_THROWS_AS(dof_segment(-1.0, 1.0), ConfigError);
}

TEST_CASE("spherical cap bandwidth matches the closed form") {
    const double theta_max = pi / 6.0;
    AngularRegionSet set;
    set.caps.push_back({{0.0, 0.0, 1.0}, theta_max});
    const double omega = bandwidth_regions(set, kMedium);
    const double exact = pi * std::pow(std::sin(theta_max) * kMedium.kappa, 2);
    CHECK(std::fabs(omega / exact - 1.0) < 5e-3);

    // full hemisphere cap saturates at the isotropic bandwidth
    AngularRegionSet full;
    full.caps.push_back({{0.0, 0.0, 1.0}, pi / 2.0});
    CHECK(bandwidth_regions(full, kMedium) ==
          doctest::Approx(bandwidth_isotropic(kMedium)).epsilon(1e-3));
    CHECK_THROWS_AS(bandwidth_regions(AngularRegionSet{}, kMedium), ConfigError);
}

TEST_CASE("region solid angle") {
    AngularRegionSet full;
    full.rects.push_back({0.0, pi / 2.0, 0.0, 2.0 * pi});
    CHECK(region_solid_angle(full) == doctest::Approx(2.0 * pi).epsilon(1e-6));
    AngularRegionSet cap;
    cap.caps.push_back({{0.0, 0.0, 1.0}, pi / 6.0});
    const double exact = 2.0 * pi * (1.0 - std::cos(pi / 6.0));
    CHECK(region_solid_angle(cap) == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("evanescent loss curve") {
    CHECK(evanescent_power_loss(0.0, kMedium) == doctest::Approx(1.0));
    const double db10 = evanescent_power_loss_db(10.0 * kMedium.lambda, kMedium);
    CHECK(db10 == doctest::Approx(-545.7505415282018).epsilon(1e-10));
    // exact log-linearity and consistency of the two forms
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double d = 0.1 * i * kMedium.lambda;
        const double db = evanescent_power_loss_db(d, kMedium);
        CHECK(db < prev);
        CHECK(db == doctest::Approx(i * evanescent_power_loss_db(
                                            0.1 * kMedium.lambda, kMedium))
                        .epsilon(1e-12));
        CHECK(std::pow(10.0, db / 10.0) ==
              doctest::Approx(evanescent_power_loss(d, kMedium)).epsilon(1e-10));
        prev = db;
    }
}

TEST_CASE("polar disk grid quadrature") {
    const double rim = 1e-3 * kMedium.kappa;
    const DiskGrid g = build_disk_grid(kMedium, GridMode::Polar, 48, 64, rim);
    REQUIRE(g.nodes.size() == 48u * 64u);
    const double rmax = kMedium.kappa - rim;
    CHECK(g.weight_sum() == doctest::Approx(pi * rmax * rmax).epsilon(1e-13));
    CHECK(g.retained_radius() == doctest::Approx(rmax).epsilon(1e-14));
    for (const auto& n : g.nodes) {
        CHECK(n.gamma > 0.0);
        CHECK(n.gamma * n.gamma + n.kx * n.kx + n.ky * n.ky ==
              doctest::Approx(kMedium.kappa * kMedium.kappa).epsilon(1e-12));
        REQUIRE(n.neg_index >= 0);
        const auto& m = g.nodes[n.neg_index];
        CHECK(m.kx == doctest::Approx(-n.kx).epsilon(1e-12));
        CHECK(m.ky == doctest::Approx(-n.ky).epsilon(1e-12));
    }
}

TEST_CASE("cartesian disk grid negation closure") {
    const DiskGrid g =
        build_disk_grid(kMedium, GridMode::Cartesian, 31, 31, 0.01 * kMedium.kappa);
    CHECK(g.nodes.size() > 0);
    for (const auto& n : g.nodes) {
        REQUIRE(n.neg_index >= 0);
        const auto& m = g.nodes[n.neg_index];
        CHECK(m.kx == doctest::Approx(-n.kx).scale(1.0).epsilon(1e-12));
        CHECK(m.ky == doctest::Approx(-n.ky).scale(1.0).epsilon(1e-12));
    }
    const double rmax = kMedium.kappa * 0.99;
    CHECK(g.weight_sum() == doctest::Approx(pi * rmax * rmax).epsilon(0.05));
}

TEST_CASE("inverse gamma disk integral") {
    // The continuum integral of 1/gamma over the retained disk is
    // 2*pi*(kappa - rim); the polar layout resolves it to near machine level.
    const double kappa = kMedium.kappa;
    const double rim = 1e-4 * kappa;
    const DiskGrid g = build_disk_grid(kMedium, GridMode::Polar, 128, 32, rim);
    const double rmax = kappa - rim;
    const double g_edge = std::sqrt(kappa * kappa - rmax * rmax);
    const double got = disk_inverse_gamma_integral(g);
    CHECK(got == doctest::Approx(2.0 * pi * (kappa - g_edge)).epsilon(1e-12));
    CHECK(got == doctest::Approx(2.0 * pi * kappa).epsilon(0.02));
}

TEST_CASE("disk grid input validation") {
    CHECK_THROWS_AS(build_disk_grid(kMedium, GridMode::Polar, 2, 64, 1e-3),
                    ConfigError);
    CHECK_THROWS_AS(build_disk_grid(kMedium, GridMode::Polar, 16, 16, 0.0),
                    ConfigError);
    CHECK_THROWS_AS(
        build_disk_grid(kMedium, GridMode::Polar, 16, 16, kMedium.kappa),
        ConfigError);
}
