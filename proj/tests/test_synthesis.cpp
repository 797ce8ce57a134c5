// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <memory>

#include "doctest.h"
#include "planewave/errors.hpp"
#include "planewave/synthesis.hpp"

using namespace pw;

namespace {

const MediumParams kMedium = MediumParams::from_lambda(1.0, 1.0);

std::shared_ptr<const DiskGrid> grid(int n1, int n2, double rim_frac = 1e-3) {
    return std::make_shared<DiskGrid>(build_disk_grid(
        kMedium, GridMode::Polar, n1, n2, rim_frac * kMedium.kappa));
}

SynthesisConfig base_config(std::shared_ptr<const DiskGrid> g,
                            std::uint64_t seed) {
    SynthesisConfig c;
    c.medium = kMedium;
    c.grid_r = g;
    c.grid_s = g;
    c.factor = normalize_factor(SpectralFactor::isotropic(), *g, *g, kMedium);
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("stored responses carry the 4D density variance") {
    const auto g = grid(12, 12);
    const SynthesisConfig c = base_config(g, 42);
    const std::size_t i = 37, j = 101, ms = g->nodes.size();
    double acc = 0.0;
    const int n = 4000;
    for (int t = 0; t < n; ++t) {
        const AngularResponseGrid resp = draw_angular_response(c, t);
        acc += std::norm(resp.values[i * ms + j]);
    }
    acc /= n;
    const auto& ni = g->nodes[i];
    const auto& nj = g->nodes[j];
    // E{|H|^2 * w_i * w_j} = S(k_i, q_j)
    const double s = psd4(c.factor, ni.kx, ni.ky, nj.kx, nj.ky, kMedium);
    CHECK(acc * ni.weight * nj.weight / s == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("fused synthesis equals the reference quadrature path") {
    const auto g = grid(16, 16);
    const SynthesisConfig c = base_config(g, 7);
    const std::vector<SpatialPoint> sources{{0, 0, 0}, {0.25, 0.1, 0.0}};
    const std::vector<SpatialPoint> receivers{
        {0, 0, 0}, {0.3, 0, 0}, {0.1, 0.2, 0.15}};
    const ChannelRealization a = simulate_one(c, 3, sources, receivers);
    const ChannelRealization b =
        synthesize(draw_angular_response(c, 3), sources, receivers);
    REQUIRE(a.h.size() == b.h.size());
    for (std::size_t i = 0; i < a.h.size(); ++i)
        CHECK(std::abs(a.h[i] - b.h[i]) < 1e-12 * (1.0 + std::abs(b.h[i])));
}

TEST_CASE("single source fast path preserves second order statistics") {
    const auto g = grid(16, 16);
    const SynthesisConfig c = base_config(g, 11);
    const std::vector<SpatialPoint> src{{0, 0, 0}};
    const std::vector<SpatialPoint> rec{{0, 0, 0}, {0.125, 0, 0}};
    const int n = 3000;
    double p_fast = 0.0;
    cplx c_fast{0, 0};
    for (int t = 0; t < n; ++t) {
        const ChannelRealization r = simulate_one(c, t, src, rec);
        p_fast += std::norm(r.h[0]);
        c_fast += r.h[1] * std::conj(r.h[0]);
    }
    p_fast /= n;
    c_fast /= static_cast<double>(n);
    CHECK(p_fast == doctest::Approx(1.0).epsilon(0.08));
    // lambda/8 lag of the isotropic field: sinc(1/4)
    CHECK(c_fast.real() / p_fast == doctest::Approx(0.9003163161571062).epsilon(0.08));
}

TEST_CASE("reciprocity symmetrization is exact at coincident points") {
    const auto g = grid(16, 16);
    SynthesisConfig c = base_config(g, 5);
    c.enforce_reciprocity = true;
    const std::vector<SpatialPoint> pts{
        {0, 0, 0}, {0.4, 0, 0}, {0.1, 0.7, 0}, {1.3, 0.2, 0}};
    const ChannelRealization h = simulate_one(c, 0, pts, pts);
    for (std::size_t p = 0; p < pts.size(); ++p)
        for (std::size_t q = 0; q < pts.size(); ++q)
            CHECK(std::abs(h.h[p * pts.size() + q] - h.h[q * pts.size() + p]) <
                  1e-12);
}

TEST_CASE("reciprocity configuration guards") {
    const auto g1 = grid(16, 16);
    const auto g2 = grid(16, 16);
    SynthesisConfig c = base_config(g1, 0);
    c.grid_s = g2;  // equal layout but distinct grids
    c.enforce_reciprocity = true;
    CHECK_THROWS_AS(simulate_one(c, 0, {{0, 0, 0}}, {{0, 0, 0}}), ConfigError);
    SynthesisConfig c2 = base_config(g1, 0);
    c2.enforce_reciprocity = true;
    c2.model = Model::Complete3D;
    CHECK_THROWS_AS(simulate_one(c2, 0, {{0, 0, 0}}, {{0, 0, 0}}), ConfigError);
}

TEST_CASE("complete model with only the ++ block is bitwise scalar") {
    const auto g = grid(12, 12);
    SynthesisConfig scalar = base_config(g, 19);
    SynthesisConfig complete = scalar;
    complete.model = Model::Complete3D;
    const std::vector<SpatialPoint> sources{{0, 0, 0.1}, {0.3, 0, -0.05}};
    const std::vector<SpatialPoint> receivers{{0, 0, 0}, {0.2, 0.1, 0.3}};
    const ChannelRealization a = simulate_one(scalar, 2, sources, receivers);
    const ChannelRealization b = simulate_one(complete, 2, sources, receivers);
    REQUIRE(a.h.size() == b.h.size());
    CHECK(std::memcmp(a.h.data(), b.h.data(), a.h.size() * sizeof(cplx)) == 0);
}

TEST_CASE("block powers add in the complete model") {
    const auto g = grid(12, 12);
    SynthesisConfig c = base_config(g, 23);
    c.model = Model::Complete3D;
    const double s = 0.5;
    c.block_gain[0][0] = s;
    c.block_gain[0][1] = s;
    c.block_gain[1][0] = s;
    c.block_gain[1][1] = s;
    const std::vector<SpatialPoint> src{{0, 0, 0}};
    const std::vector<SpatialPoint> rec{{0, 0, 0}};
    const int n = 1500;
    double p = 0.0;
    for (int t = 0; t < n; ++t)
        p += std::norm(simulate_one(c, t, src, rec).h[0]);
    p /= n;
    // four independent blocks with amplitude gain 1/2 each restore unit power
    CHECK(p == doctest::Approx(1.0).epsilon(0.12));
}

TEST_CASE("migration phases and the mixed response") {
    const auto g = grid(12, 12);
    const SynthesisConfig c = base_config(g, 31);
    const AngularResponseGrid resp = draw_angular_response(c, 0);
    const std::size_t ms = g->nodes.size();
    // offsets only rotate the phase
    CHECK(std::abs(spectral_response(resp, 4, 9, 0.7, -0.3)) ==
          doctest::Approx(std::abs(resp.values[4 * ms + 9])).epsilon(1e-13));
    CHECK_THROWS_AS(spectral_response(resp, -1, 0, 0, 0), ConfigError);

    // the receive-side partial sum reassembles the full channel
    const SpatialPoint r{0.2, -0.1, 0.3};
    const SpatialPoint s{0.15, 0.05, 0.1};
    cplx acc{0, 0};
    for (std::size_t j = 0; j < ms; ++j) {
        const auto& nj = g->nodes[j];
        const double ph = -(nj.kx * s.x + nj.ky * s.y);
        acc += mixed_receive_response(resp, r, static_cast<int>(j), s.z) *
               cplx{std::cos(ph), std::sin(ph)} * nj.weight;
    }
    // mixed_receive_response already carries the 1/(2*pi)^2 prefactor
    const ChannelRealization h = synthesize(resp, {s}, {r});
    CHECK(std::abs(acc - h.h[0]) < 1e-12 * (1.0 + std::abs(h.h[0])));
}

TEST_CASE("system function shift on a negation closed lattice") {
    const auto g = std::make_shared<DiskGrid>(build_disk_grid(
        kMedium, GridMode::Cartesian, 9, 9, 0.05 * kMedium.kappa));
    SynthesisConfig c;
    c.medium = kMedium;
    c.grid_r = g;
    c.grid_s = g;
    c.factor = normalize_factor(SpectralFactor::isotropic(), *g, *g, kMedium);
    c.seed = 3;
    const AngularResponseGrid resp = draw_angular_response(c, 0);
    const int center = find_node(*g, 0.0, 0.0);
    REQUIRE(center >= 0);
    // q = 0: the shift map reduces to the response at (k, 0)
    const int i = 5;
    const cplx direct = spectral_response(resp, i, center, 0.4, 0.4 - 0.1);
    const cplx shifted = system_function_shift(resp, i, center, 0.4, 0.1);
    CHECK(std::abs(direct - shifted) < 1e-13);
    CHECK(find_node(*g, 12.345, 0.0) == -1);
}

TEST_CASE("impulse response lookup") {
    const auto g = grid(12, 12);
    const SynthesisConfig c = base_config(g, 1);
    const std::vector<SpatialPoint> sources{{0.1, 0, 0}};
    const std::vector<SpatialPoint> receivers{{0.5, 0.2, 0}};
    const ChannelRealization h = simulate_one(c, 0, sources, receivers);
    const SpatialPoint p{0.4, 0.2, 0.0};  // r - s
    CHECK(lsv_impulse_response(h, receivers[0], p) == h.h[0]);
    CHECK_THROWS_AS(lsv_impulse_response(h, {9, 9, 9}, p), ConfigError);
}

TEST_CASE("ordered delivery is thread count invariant") {
    const auto g = grid(12, 12);
    const SynthesisConfig c = base_config(g, 77);
    const std::vector<SpatialPoint> src{{0, 0, 0}, {0.3, 0, 0}};
    const std::vector<SpatialPoint> rec{{0, 0, 0}, {0.2, 0.2, 0}};
    auto run = [&](int threads) {
        std::vector<cplx> all;
        simulate_realizations(c, 6, src, rec,
                              [&](const ChannelRealization& r) {
                                  all.insert(all.end(), r.h.begin(), r.h.end());
                              },
                              threads);
        return all;
    };
    const auto a = run(1);
    const auto b = run(3);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0);
}

TEST_CASE("2D synthesis statistics") {
    Synthesis2DConfig c;
    c.medium = kMedium;
    c.n_nodes = 96;
    c.seed = 13;
    c.density = [](double, double) { return 1.0 / ((pi / 2.0) * (pi / 2.0)); };
    const std::vector<SpatialPoint> src{{0, 0, 0}};
    const std::vector<SpatialPoint> rec{{0, 0, 0}, {0.25, 0, 0}};
    const int n = 2500;
    double p = 0.0;
    cplx corr{0, 0};
    for (int t = 0; t < n; ++t) {
        const ChannelRealization h = synthesize_2d(c, t, src, rec, true);
        p += std::norm(h.h[0]);
        corr += h.h[1] * std::conj(h.h[0]);
    }
    p /= n;
    corr /= static_cast<double>(n);
    CHECK(p == doctest::Approx(1.0).epsilon(0.08));
    // covariance against the direct quadrature of the 2D spectral density
    const int m = 4096;
    cplx exact{0, 0};
    const double dt = (pi / 2.0) / m;
    for (int i = 0; i < m; ++i) {
        const double th = (i + 0.5) * dt;
        const double ph = kMedium.kappa * 0.25 * std::cos(th);
        exact += cplx{std::cos(ph), std::sin(ph)};
    }
    exact *= dt / (pi / 2.0);
    CHECK(std::abs(corr - exact) < 3.0 / std::sqrt(double(n)) + 0.02);
}

TEST_CASE("2D parametrizations share second order statistics") {
    Synthesis2DConfig c;
    c.medium = kMedium;
    c.n_nodes = 64;
    c.seed = 29;
    c.density = [](double, double) { return 1.0 / ((pi / 2.0) * (pi / 2.0)); };
    const std::vector<SpatialPoint> src{{0, 0, 0}};
    const std::vector<SpatialPoint> rec{{0.1, 0.2, 0}};
    const int n = 1500;
    double pa = 0.0, pb = 0.0;
    for (int t = 0; t < n; ++t) {
        pa += std::norm(synthesize_2d(c, t, src, rec, true).h[0]);
        pb += std::norm(synthesize_2d(c, t, src, rec, false).h[0]);
    }
    CHECK(pa / n == doctest::Approx(1.0).epsilon(0.1));
    CHECK(pb / n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("free space reference and ray synthesis") {
    const ChannelRealization g =
        freespace_reference({{0, 0, 0}}, {{0.5, 0, 0}}, kMedium);
    const cplx expect = cplx{0.0, -1.0} * kMedium.kappa * kMedium.eta *
                        green3({0.5, 0, 0}, kMedium);
    CHECK(std::abs(g.h[0] - expect) < 1e-14);

    std::vector<Ray> rays;
    rays.push_back({{0, 0, 1}, {0, 0, 1}, 1.0});
    const ChannelRealization one = synthesize_rays(
        rays, kMedium, 0, 0, {{0, 0, 0.2}}, {{0, 0, 0.7}}, false);
    const double ph = kMedium.kappa * (0.7 - 0.2);
    CHECK(std::abs(one.h[0] - cplx{std::cos(ph), std::sin(ph)}) < 1e-14);
    const ChannelRealization rnd = synthesize_rays(
        rays, kMedium, 0, 0, {{0, 0, 0.2}}, {{0, 0, 0.7}}, true);
    CHECK(std::abs(rnd.h[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(synthesize_rays({}, kMedium, 0, 0, {{0, 0, 0}}, {{0, 0, 0}}),
                    ConfigError);
}
