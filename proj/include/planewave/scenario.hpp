// SPDX-License-Identifier: Apache-2.0
//
// Scenario configs, presets and the batch subcommands. All spatial inputs are
// given in wavelength units and converted once at the boundary.

#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "planewave/synthesis.hpp"
#include "planewave/validation.hpp"

namespace pw {

struct Scenario {
    MediumParams medium;
    Model model = Model::Scalar3D;
    std::uint64_t seed = 0;
    int n_realizations = 10;
    double target_power = 1.0;
    bool enforce_reciprocity = false;
    AngularDistribution source_angular, receive_angular;
    GridMode grid_mode = GridMode::Polar;
    int grid_n1 = 64, grid_n2 = 64;
    double rim_cut_frac = 1e-3;
    std::vector<SpatialPoint> sources, receivers;  // meters
    double block_gain[2][2] = {{1.0, 0.0}, {0.0, 0.0}};
    bool inject_off_disk_node = false;  // forced-failure fixture
    std::string name = "custom";
    std::string config_hash;            // of the canonical JSON form
    nlohmann::json raw;

    // Builds grids and the factor normalized to target_power on them.
    SynthesisConfig make_config() const;
};

// Throws ConfigError with the offending field path on schema violations;
// unknown keys are rejected.
Scenario parse_scenario_json(const nlohmann::json& j);
Scenario parse_scenario_file(const std::string& path);

// "isotropic", "fig8b" or "fig8c".
Scenario preset_scenario(const std::string& name);

// Subcommands. Return process exit codes: 0 pass, 1 validation failure,
// 2 config error, 3 resource guard.
int cmd_synthesize(const Scenario& sc, const std::string& out_dir, int threads);
int cmd_acf(const Scenario& sc, const std::string& out_dir, int threads);
int cmd_validate(const Scenario& sc, const std::string& out_dir, int threads,
                 const std::string& only = "");
int cmd_angular(const Scenario& sc, const std::string& out_dir,
                int theta_res = 64, int phi_res = 128);

nlohmann::json disk_grid_to_json(const DiskGrid& grid, bool include_nodes = false);

std::string fnv1a_hex(const std::string& data);

inline constexpr const char* kLibraryVersion = "1.0.0";

}  // namespace pw
