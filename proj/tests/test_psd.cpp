// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>

#include "doctest.h"
#include "planewave/errors.hpp"
#include "planewave/psd.hpp"
#include "planewave/rng.hpp"

using namespace pw;

namespace {

const MediumParams kMedium = MediumParams::from_lambda(1.0, 1.0);

std::shared_ptr<const DiskGrid> grid(int n1, int n2, double rim_frac) {
    return std::make_shared<DiskGrid>(build_disk_grid(
        kMedium, GridMode::Polar, n1, n2, rim_frac * kMedium.kappa));
}

AngularDistribution tilted_vmf(double alpha) {
    VmfMixture m;
    m.components.push_back(
        {spherical_to_cosine({pi / 4.0, 0.0}), alpha});
    m.weights.push_back(1.0);
    return AngularDistribution::from_mixture(std::move(m));
}

}  // namespace

TEST_CASE("closed form isotropic factor constant") {
    CHECK(isotropic_spectral_factor_sq(kMedium) ==
          doctest::Approx(2.0 * pi * pi / kMedium.kappa).epsilon(1e-15));
}

TEST_CASE("isotropic unit power on the disk and on the sphere") {
    const auto g = grid(128, 64, 1e-5);
    const SpectralFactor f = SpectralFactor::isotropic();
    // rim truncation removes about sqrt(2*rim_frac) of the power
    CHECK(average_power(f, *g, *g, kMedium) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(average_power_spherical(f, kMedium) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("separable vMF factor power agrees across parametrizations") {
    const auto g = grid(192, 96, 1e-5);
    const SpectralFactor f =
        SpectralFactor::separable(tilted_vmf(5.0), tilted_vmf(1.0));
    const double disk = average_power(f, *g, *g, kMedium);
    const double sphere = average_power_spherical(f, kMedium);
    CHECK(disk == doctest::Approx(sphere).epsilon(0.02));
    CHECK(sphere == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("normalization pins the grid power exactly") {
    const auto g = grid(48, 48, 1e-3);
    for (double target : {1.0, 2.5}) {
        const SpectralFactor f = normalize_factor(
            SpectralFactor::separable(tilted_vmf(10.0),
                                      AngularDistribution::isotropic()),
            *g, *g, kMedium, target);
        CHECK(average_power(f, *g, *g, kMedium) ==
              doctest::Approx(target).epsilon(1e-12));
    }
    CHECK_THROWS_AS(normalize_factor(SpectralFactor::isotropic(), *g, *g,
                                     kMedium, -1.0),
                    ConfigError);
}

TEST_CASE("psd4 closed form and domain") {
    const SpectralFactor f = SpectralFactor::isotropic();
    const double k = kMedium.kappa;
    const double kx = 0.3 * k, qy = 0.5 * k;
    const double a = factor_value(f, kx, 0.0, 0.0, qy, kMedium);
    const double gk = std::sqrt(k * k - kx * kx);
    const double gq = std::sqrt(k * k - qy * qy);
    const double half = k * kMedium.eta / 2.0;
    CHECK(psd4(f, kx, 0.0, 0.0, qy, kMedium) ==
          doctest::Approx(half * half * a * a / (gk * gq)).epsilon(1e-14));
    CHECK_THROWS_AS(psd4(f, 1.1 * k, 0.0, 0.0, 0.0, kMedium), ConfigError);
    CHECK_THROWS_AS(psd4(f, k, 0.0, 0.0, 0.0, kMedium), ConfigError);
}

TEST_CASE("coupled factor round trip") {
    const auto g = grid(24, 24, 1e-3);
    const std::size_t m = g->nodes.size();
    // constant coupled factor equal to the pinned isotropic constant
    const double c = 4.0 * pi / (kMedium.kappa * kMedium.kappa * kMedium.eta);
    SpectralFactor f = SpectralFactor::coupled(g, g, std::vector<double>(m * m, c));
    const SpectralFactor iso = SpectralFactor::isotropic();
    CHECK(average_power(f, *g, *g, kMedium) ==
          doctest::Approx(average_power(iso, *g, *g, kMedium)).epsilon(1e-12));
    CHECK(factor_value_at(f, *g, 3, *g, 5, kMedium) ==
          doctest::Approx(factor_value_at(iso, *g, 3, *g, 5, kMedium))
              .epsilon(1e-14));
    CHECK_THROWS_AS(factor_value(f, 0.0, 0.0, 0.0, 0.0, kMedium), ConfigError);
    CHECK_THROWS_AS(
        SpectralFactor::coupled(g, g, std::vector<double>(m * m - 1, c)),
        ConfigError);
    CHECK_THROWS_AS(
        SpectralFactor::coupled(g, g, std::vector<double>(m * m, -1.0)),
        ConfigError);
}

TEST_CASE("factor from a 6D angular kernel") {
    const auto g = grid(24, 24, 1e-3);
    const double a6 = std::sqrt(isotropic_spectral_factor_sq(kMedium));
    SpectralFactor f = factor_from_6d(
        [a6](const Direction3&, const Direction3&) { return a6; }, g, g,
        kMedium);
    CHECK(f.form == SpectralFactor::Form::Coupled);
    CHECK(f.values.front() ==
          doctest::Approx(a6 / (2.0 * pi * kMedium.kappa * kMedium.eta))
              .epsilon(1e-14));
}

TEST_CASE("power bound dominates the quadrature power") {
    const auto g = grid(16, 16, 1e-3);
    const std::size_t m = g->nodes.size();
    Rng rng{stream_key(11, kStreamSampling, 2), 0};
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> vals(m * m);
        for (auto& v : vals) v = rng.u01() * 3.0;
        const SpectralFactor f = SpectralFactor::coupled(g, g, std::move(vals));
        CHECK(average_power(f, *g, *g, kMedium) <=
              mercer_power_bound(f, *g, *g, kMedium));
    }
    // separable form
    const SpectralFactor fs =
        SpectralFactor::separable(tilted_vmf(4.0), tilted_vmf(2.0));
    CHECK(average_power(fs, *g, *g, kMedium) <=
          mercer_power_bound(fs, *g, *g, kMedium));
}
