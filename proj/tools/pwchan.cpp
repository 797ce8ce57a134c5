// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: synthesize | acf | validate | angular over JSON scenarios
// or built-in presets.

#include <cstdio>
#include <thread>

#include "CLI11.hpp"
#include "planewave/errors.hpp"
#include "planewave/scenario.hpp"

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string preset;
    std::string out_dir = "out";
    std::string only;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario_path, "Scenario JSON file");
    cmd->add_option("--preset", o.preset,
                    "Built-in scenario: isotropic, fig8b or fig8c");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--threads", o.threads,
                    "Worker threads (0 = available cores)");
    cmd->add_option("--seed", o.seed, "Override the scenario seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
}

pw::Scenario load_scenario(const CommonOpts& o) {
    if (o.scenario_path.empty() == o.preset.empty())
        throw pw::ConfigError("give exactly one of --scenario and --preset");
    pw::Scenario sc = o.scenario_path.empty()
                          ? pw::preset_scenario(o.preset)
                          : pw::parse_scenario_file(o.scenario_path);
    if (o.seed_set) {
        sc.seed = o.seed;
        sc.raw["seed"] = o.seed;
        sc.config_hash = pw::fnv1a_hex(sc.raw.dump());
    }
    return sc;
}

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic wideband spatial channel synthesis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pw::kLibraryVersion);

    CommonOpts o;
    CLI::App* synth = app.add_subcommand("synthesize",
                                         "Draw channel realizations");
    CLI::App* acf = app.add_subcommand("acf", "Empirical autocorrelation");
    CLI::App* validate = app.add_subcommand("validate",
                                            "Run the property check suite");
    CLI::App* angular = app.add_subcommand("angular",
                                           "Export the angular density grid");
    for (CLI::App* cmd : {synth, acf, validate, angular}) add_common(cmd, o);
    validate->add_option("--only", o.only, "Run a single named check");

    CLI11_PARSE(app, argc, argv);

    try {
        const pw::Scenario sc = load_scenario(o);
        const int threads = effective_threads(o.threads);
        if (synth->parsed()) return pw::cmd_synthesize(sc, o.out_dir, threads);
        if (acf->parsed()) return pw::cmd_acf(sc, o.out_dir, threads);
        if (validate->parsed())
            return pw::cmd_validate(sc, o.out_dir, threads, o.only);
        return pw::cmd_angular(sc, o.out_dir);
    } catch (const pw::ResourceGuard& e) {
        std::fprintf(stderr, "resource guard: %s\n", e.what());
        return 3;
    } catch (const pw::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
