// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "planewave/errors.hpp"
#include "planewave/scenario.hpp"

using namespace pw;
using nlohmann::json;

TEST_CASE("fnv1a reference vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("presets") {
    const Scenario iso = preset_scenario("isotropic");
    CHECK(iso.receive_angular.kind == AngularDistribution::Kind::Isotropic);
    CHECK(iso.seed == 0);
    CHECK_FALSE(iso.config_hash.empty());

    const Scenario b = preset_scenario("fig8b");
    REQUIRE(b.receive_angular.kind == AngularDistribution::Kind::Mixture);
    REQUIRE(b.receive_angular.mixture.components.size() == 1);
    const auto& comp = b.receive_angular.mixture.components[0];
    CHECK(circular_variance(comp.alpha) == doctest::Approx(0.01).epsilon(1e-9));
    const SphericalAngles mu = cosine_to_spherical(comp.mu.x, comp.mu.y);
    CHECK(mu.theta == doctest::Approx(pi / 4.0).epsilon(1e-12));
    CHECK(mu.phi == doctest::Approx(0.0).scale(1.0));

    const Scenario c = preset_scenario("fig8c");
    REQUIRE(c.receive_angular.mixture.components.size() == 3);
    CHECK(c.receive_angular.mixture.weights[0] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(preset_scenario("nope"), ConfigError);
}

TEST_CASE("schema rejects unknown keys with a field path") {
    json j;
    j["bogus"] = 1;
    try {
        parse_scenario_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("$.bogus") != std::string::npos);
    }
    json nested;
    nested["grid"] = {{"mode", "polar"}, {"oops", 3}};
    try {
        parse_scenario_json(nested);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("$.grid.oops") != std::string::npos);
    }
}

TEST_CASE("schema validation details") {
    json j;
    j["n_realizations"] = 0;
    CHECK_THROWS_AS(parse_scenario_json(j), ConfigError);

    json both;
    both["spectral_factor"] = {
        {"form", "separable"},
        {"receive",
         {{"type", "vmf_mixture"},
          {"components", json::array({{{"theta_mu_deg", 45},
                                       {"alpha", 3.0},
                                       {"circular_variance", 0.5}}})}}}};
    CHECK_THROWS_AS(parse_scenario_json(both), ConfigError);

    // missing seed defaults to 0 and is recorded in the canonical form
    const Scenario sc = parse_scenario_json(json::object());
    CHECK(sc.seed == 0);
    CHECK(sc.raw.at("seed").get<std::uint64_t>() == 0);
}

TEST_CASE("config hash tracks the seed") {
    json j;
    j["seed"] = 1;
    const Scenario a = parse_scenario_json(j);
    j["seed"] = 2;
    const Scenario b = parse_scenario_json(j);
    CHECK(a.config_hash != b.config_hash);
}

TEST_CASE("point lattice parsing in wavelength units") {
    json j;
    j["lambda"] = 2.0;
    j["receivers"] = {{"type", "line"},
                      {"count", 3},
                      {"spacing_lambda", 0.25},
                      {"axis", "z"},
                      {"origin_lambda", json::array({0.0, 0.0, 1.0})}};
    j["sources"] = {{"type", "rectangle"},
                    {"nx", 2},
                    {"ny", 2},
                    {"spacing_lambda", 0.5}};
    const Scenario sc = parse_scenario_json(j);
    REQUIRE(sc.receivers.size() == 3);
    CHECK(sc.receivers[0].z == doctest::Approx(2.0));
    CHECK(sc.receivers[2].z == doctest::Approx(3.0));
    REQUIRE(sc.sources.size() == 4);
    CHECK(sc.sources[3].x == doctest::Approx(1.0));
    CHECK(sc.sources[3].y == doctest::Approx(1.0));
}

TEST_CASE("make_config pins the grid power to the target") {
    json j;
    j["target_power"] = 2.0;
    j["grid"] = {{"mode", "polar"}, {"n1", 24}, {"n2", 24}};
    const Scenario sc = parse_scenario_json(j);
    const SynthesisConfig c = sc.make_config();
    CHECK(average_power(c.factor, *c.grid_r, *c.grid_s, sc.medium) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.grid_r.get() == c.grid_s.get());
}

TEST_CASE("disk grid serialization") {
    const DiskGrid g = build_disk_grid(MediumParams::from_lambda(1.0, 1.0),
                                       GridMode::Polar, 8, 8, 1e-3);
    const json j = disk_grid_to_json(g, true);
    CHECK(j.at("mode") == "polar");
    CHECK(j.at("node_count") == 64);
    CHECK(j.at("nodes").size() == 64);
    CHECK(j.at("nodes")[0].contains("gamma"));
}
