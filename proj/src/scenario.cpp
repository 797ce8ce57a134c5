// SPDX-License-Identifier: Apache-2.0

#include "planewave/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "planewave/errors.hpp"

namespace pw {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& path) {
    if (!j.is_object())
        throw ConfigError("scenario: " + path + " must be an object");
    for (const auto& [key, val] : j.items())
        if (!allowed.count(key))
            throw ConfigError("scenario: unknown key " + path + "." + key);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback,
         const std::string& path) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("scenario: bad value at " + path + "." + key);
    }
}

double deg2rad(double d) { return d * pi / 180.0; }

AngularDistribution parse_angular(const json& j, const std::string& path) {
    const std::string type = get_or<std::string>(j, "type", "", path);
    if (type == "isotropic") {
        reject_unknown(j, {"type", "halved_sphere_norm"}, path);
        return AngularDistribution::isotropic(
            get_or<bool>(j, "halved_sphere_norm", false, path));
    }
    if (type == "vmf_mixture") {
        reject_unknown(j, {"type", "components", "weights", "halved_sphere_norm"},
                       path);
        if (!j.contains("components") || !j.at("components").is_array())
            throw ConfigError("scenario: " + path + ".components missing");
        VmfMixture mix;
        int idx = 0;
        for (const auto& c : j.at("components")) {
            const std::string cpath =
                path + ".components[" + std::to_string(idx++) + "]";
            reject_unknown(c,
                           {"theta_mu_deg", "phi_mu_deg", "alpha",
                            "circular_variance"},
                           cpath);
            if (c.contains("alpha") == c.contains("circular_variance"))
                throw ConfigError("scenario: " + cpath +
                                  " needs exactly one of alpha, "
                                  "circular_variance");
            VmfComponent comp;
            const double theta =
                deg2rad(get_or<double>(c, "theta_mu_deg", 0.0, cpath));
            const double phi =
                deg2rad(get_or<double>(c, "phi_mu_deg", 0.0, cpath));
            comp.mu = spherical_to_cosine({theta, phi});
            comp.alpha = c.contains("alpha")
                             ? get_or<double>(c, "alpha", 0.0, cpath)
                             : alpha_from_variance(get_or<double>(
                                   c, "circular_variance", 1.0, cpath));
            mix.components.push_back(comp);
        }
        if (j.contains("weights")) {
            for (const auto& w : j.at("weights"))
                mix.weights.push_back(w.get<double>());
        } else {
            mix.weights.assign(mix.components.size(),
                               1.0 / mix.components.size());
        }
        return AngularDistribution::from_mixture(
            std::move(mix), get_or<bool>(j, "halved_sphere_norm", false, path));
    }
    throw ConfigError("scenario: " + path + ".type must be isotropic or "
                      "vmf_mixture");
}

std::vector<SpatialPoint> parse_points(const json& j, double lambda,
                                       const std::string& path) {
    const std::string type = get_or<std::string>(j, "type", "", path);
    std::vector<SpatialPoint> pts;
    if (type == "line") {
        reject_unknown(j, {"type", "count", "spacing_lambda", "axis",
                           "origin_lambda"},
                       path);
        const int count = get_or<int>(j, "count", 0, path);
        if (count < 1)
            throw ConfigError("scenario: " + path + ".count must be >= 1");
        const double d =
            get_or<double>(j, "spacing_lambda", 0.25, path) * lambda;
        const std::string axis = get_or<std::string>(j, "axis", "x", path);
        SpatialPoint o{0.0, 0.0, 0.0};
        if (j.contains("origin_lambda")) {
            const auto& a = j.at("origin_lambda");
            if (!a.is_array() || a.size() != 3)
                throw ConfigError("scenario: " + path +
                                  ".origin_lambda must have 3 entries");
            o = {a[0].get<double>() * lambda, a[1].get<double>() * lambda,
                 a[2].get<double>() * lambda};
        }
        for (int i = 0; i < count; ++i) {
            SpatialPoint p = o;
            if (axis == "x") p.x += i * d;
            else if (axis == "y") p.y += i * d;
            else if (axis == "z") p.z += i * d;
            else throw ConfigError("scenario: " + path + ".axis must be x, y "
                                   "or z");
            pts.push_back(p);
        }
        return pts;
    }
    if (type == "rectangle") {
        reject_unknown(j, {"type", "nx", "ny", "spacing_lambda",
                           "origin_lambda"},
                       path);
        const int nx = get_or<int>(j, "nx", 0, path);
        const int ny = get_or<int>(j, "ny", 0, path);
        if (nx < 1 || ny < 1)
            throw ConfigError("scenario: " + path + ".nx/.ny must be >= 1");
        const double d =
            get_or<double>(j, "spacing_lambda", 0.5, path) * lambda;
        for (int i = 0; i < nx; ++i)
            for (int k = 0; k < ny; ++k)
                pts.push_back({i * d, k * d, 0.0});
        return pts;
    }
    if (type == "list") {
        reject_unknown(j, {"type", "points_lambda"}, path);
        if (!j.contains("points_lambda"))
            throw ConfigError("scenario: " + path + ".points_lambda missing");
        for (const auto& a : j.at("points_lambda")) {
            if (!a.is_array() || a.size() != 3)
                throw ConfigError("scenario: " + path +
                                  ".points_lambda entries need 3 coordinates");
            pts.push_back({a[0].get<double>() * lambda,
                           a[1].get<double>() * lambda,
                           a[2].get<double>() * lambda});
        }
        if (pts.empty())
            throw ConfigError("scenario: " + path + ".points_lambda is empty");
        return pts;
    }
    throw ConfigError("scenario: " + path +
                      ".type must be line, rectangle or list");
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + path);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

json manifest_base(const Scenario& sc, const std::string& command) {
    json m;
    m["command"] = command;
    m["scenario"] = sc.name;
    m["seed"] = sc.seed;
    m["config_hash"] = sc.config_hash;
    m["library_version"] = kLibraryVersion;
    return m;
}

void write_manifest(const Scenario& sc, const std::string& command,
                    const std::string& out_dir, json extra) {
    json m = manifest_base(sc, command);
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

std::string ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);
    return out_dir;
}

void append_complex64(std::string& blob, const cplx& v) {
    const float re = static_cast<float>(v.real());
    const float im = static_cast<float>(v.imag());
    blob.append(reinterpret_cast<const char*>(&re), sizeof re);
    blob.append(reinterpret_cast<const char*>(&im), sizeof im);
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

json disk_grid_to_json(const DiskGrid& grid, bool include_nodes) {
    json j;
    j["mode"] = grid.mode == GridMode::Polar ? "polar" : "cartesian";
    j["n1"] = grid.n1;
    j["n2"] = grid.n2;
    j["rim_cut"] = grid.rim_cut;
    j["node_count"] = grid.nodes.size();
    j["weight_sum"] = grid.weight_sum();
    if (include_nodes) {
        json nodes = json::array();
        for (const auto& n : grid.nodes)
            nodes.push_back({{"kx", n.kx},
                             {"ky", n.ky},
                             {"gamma", n.gamma},
                             {"weight", n.weight},
                             {"neg_index", n.neg_index}});
        j["nodes"] = std::move(nodes);
    }
    return j;
}

SynthesisConfig Scenario::make_config() const {
    SynthesisConfig c;
    c.medium = medium;
    c.model = model;
    c.seed = seed;
    c.enforce_reciprocity = enforce_reciprocity;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) c.block_gain[a][b] = block_gain[a][b];
    auto grid = std::make_shared<DiskGrid>(build_disk_grid(
        medium, grid_mode, grid_n1, grid_n2, rim_cut_frac * medium.kappa));
    c.grid_r = grid;
    c.grid_s = grid;
    const bool iso_r =
        receive_angular.kind == AngularDistribution::Kind::Isotropic &&
        !receive_angular.halved_sphere_norm;
    const bool iso_s =
        source_angular.kind == AngularDistribution::Kind::Isotropic &&
        !source_angular.halved_sphere_norm;
    SpectralFactor f = (iso_r && iso_s)
                           ? SpectralFactor::isotropic()
                           : SpectralFactor::separable(receive_angular,
                                                       source_angular);
    c.factor = normalize_factor(std::move(f), *grid, *grid, medium,
                                target_power);
    return c;
}

Scenario parse_scenario_json(const json& j) {
    reject_unknown(j,
                   {"name", "lambda", "eta", "model", "seed", "n_realizations",
                    "target_power", "enforce_reciprocity", "grid",
                    "spectral_factor", "sources", "receivers", "block_gain",
                    "inject_off_disk_node"},
                   "$");
    Scenario sc;
    sc.name = get_or<std::string>(j, "name", "custom", "$");
    const double lambda = get_or<double>(j, "lambda", 1.0, "$");
    const double eta = get_or<double>(j, "eta", 1.0, "$");
    sc.medium = MediumParams::from_lambda(lambda, eta);
    const std::string model = get_or<std::string>(j, "model", "scalar3d", "$");
    if (model == "scalar3d") sc.model = Model::Scalar3D;
    else if (model == "complete3d") sc.model = Model::Complete3D;
    else if (model == "scalar2d") sc.model = Model::Scalar2D;
    else throw ConfigError("scenario: $.model must be scalar3d, complete3d or "
                           "scalar2d");
    sc.seed = get_or<std::uint64_t>(j, "seed", 0, "$");
    sc.n_realizations = get_or<int>(j, "n_realizations", 10, "$");
    if (sc.n_realizations < 1)
        throw ConfigError("scenario: $.n_realizations must be >= 1");
    sc.target_power = get_or<double>(j, "target_power", 1.0, "$");
    if (!(sc.target_power > 0.0))
        throw ConfigError("scenario: $.target_power must be positive");
    sc.enforce_reciprocity =
        get_or<bool>(j, "enforce_reciprocity", false, "$");
    sc.inject_off_disk_node =
        get_or<bool>(j, "inject_off_disk_node", false, "$");

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"mode", "n1", "n2", "rim_cut_frac"}, "$.grid");
        const std::string mode =
            get_or<std::string>(g, "mode", "polar", "$.grid");
        if (mode == "polar") sc.grid_mode = GridMode::Polar;
        else if (mode == "cartesian") sc.grid_mode = GridMode::Cartesian;
        else throw ConfigError("scenario: $.grid.mode must be polar or "
                               "cartesian");
        sc.grid_n1 = get_or<int>(g, "n1", 64, "$.grid");
        sc.grid_n2 = get_or<int>(g, "n2", 64, "$.grid");
        sc.rim_cut_frac = get_or<double>(g, "rim_cut_frac", 1e-3, "$.grid");
    }

    if (j.contains("spectral_factor")) {
        const auto& f = j.at("spectral_factor");
        reject_unknown(f, {"form", "source", "receive"}, "$.spectral_factor");
        const std::string form =
            get_or<std::string>(f, "form", "isotropic", "$.spectral_factor");
        if (form == "isotropic") {
            sc.source_angular = AngularDistribution::isotropic();
            sc.receive_angular = AngularDistribution::isotropic();
        } else if (form == "separable") {
            sc.source_angular =
                f.contains("source")
                    ? parse_angular(f.at("source"), "$.spectral_factor.source")
                    : AngularDistribution::isotropic();
            sc.receive_angular =
                f.contains("receive")
                    ? parse_angular(f.at("receive"),
                                    "$.spectral_factor.receive")
                    : AngularDistribution::isotropic();
        } else {
            throw ConfigError("scenario: $.spectral_factor.form must be "
                              "isotropic or separable");
        }
    }

    sc.sources = j.contains("sources")
                     ? parse_points(j.at("sources"), lambda, "$.sources")
                     : std::vector<SpatialPoint>{{0.0, 0.0, 0.0}};
    if (j.contains("receivers")) {
        sc.receivers = parse_points(j.at("receivers"), lambda, "$.receivers");
    } else {
        for (int i = 0; i < 8; ++i)
            sc.receivers.push_back({i * lambda / 4.0, 0.0, 0.0});
    }

    if (j.contains("block_gain")) {
        const auto& b = j.at("block_gain");
        if (!b.is_array() || b.size() != 2 || !b[0].is_array() ||
            b[0].size() != 2 || b[1].size() != 2)
            throw ConfigError("scenario: $.block_gain must be a 2x2 array");
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c)
                sc.block_gain[a][c] = b[a][c].get<double>();
    }

    sc.raw = j;
    if (!sc.raw.contains("seed")) sc.raw["seed"] = sc.seed;
    sc.config_hash = fnv1a_hex(sc.raw.dump());
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("scenario file not found: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return parse_scenario_json(j);
}

Scenario preset_scenario(const std::string& name) {
    json j;
    j["name"] = name;
    j["lambda"] = 1.0;
    j["n_realizations"] = 500;
    j["receivers"] = {{"type", "line"},
                      {"count", 13},
                      {"spacing_lambda", 0.125},
                      {"axis", "x"}};
    j["sources"] = {{"type", "list"},
                    {"points_lambda", json::array({json::array({0, 0, 0})})}};
    if (name == "isotropic") {
        j["spectral_factor"] = {{"form", "isotropic"}};
    } else if (name == "fig8b") {
        j["spectral_factor"] = {
            {"form", "separable"},
            {"receive",
             {{"type", "vmf_mixture"},
              {"components", json::array({{{"theta_mu_deg", 45},
                                           {"phi_mu_deg", 0},
                                           {"circular_variance", 0.01}}})}}}};
    } else if (name == "fig8c") {
        j["spectral_factor"] = {
            {"form", "separable"},
            {"receive",
             {{"type", "vmf_mixture"},
              {"components", json::array({{{"theta_mu_deg", 45},
                                           {"phi_mu_deg", 0},
                                           {"circular_variance", 0.01}},
                                          {{"theta_mu_deg", 50},
                                           {"phi_mu_deg", 90},
                                           {"circular_variance", 0.02}},
                                          {{"theta_mu_deg", 20},
                                           {"phi_mu_deg", 130},
                                           {"circular_variance", 0.004}}})}}}};
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return parse_scenario_json(j);
}

int cmd_synthesize(const Scenario& sc, const std::string& out_dir,
                   int threads) {
    ensure_dir(out_dir);
    const std::size_t pr = sc.receivers.size(), ps = sc.sources.size();
    std::string csv = "realization,r_index,s_index,re,im\n";
    std::string blob;
    blob.reserve(sc.n_realizations * pr * ps * 8);
    auto sink = [&](const ChannelRealization& r) {
        for (std::size_t p = 0; p < pr; ++p)
            for (std::size_t q = 0; q < ps; ++q) {
                const cplx v = r.h[p * ps + q];
                csv += std::to_string(r.realization) + "," +
                       std::to_string(p) + "," + std::to_string(q) + "," +
                       fmt(v.real()) + "," + fmt(v.imag()) + "\n";
                append_complex64(blob, v);
            }
    };
    if (sc.model == Model::Scalar2D) {
        Synthesis2DConfig c2;
        c2.medium = sc.medium;
        c2.seed = sc.seed;
        c2.density = [](double, double) { return 1.0 / ((pi / 2) * (pi / 2)); };
        for (int t = 0; t < sc.n_realizations; ++t)
            sink(synthesize_2d(c2, t, sc.sources, sc.receivers, true));
    } else {
        const SynthesisConfig config = sc.make_config();
        simulate_realizations(config, sc.n_realizations, sc.sources,
                              sc.receivers, sink, threads);
    }
    write_file(out_dir + "/realizations.csv", csv);
    write_file(out_dir + "/realizations.bin", blob);
    json extra;
    extra["shape"] = {sc.n_realizations, pr, ps};
    extra["dtype"] = "complex64_le";
    extra["files"] = {{"csv", "realizations.csv"}, {"bin", "realizations.bin"}};
    if (sc.model != Model::Scalar2D) {
        const SynthesisConfig config = sc.make_config();
        extra["grid"] = disk_grid_to_json(*config.grid_r);
    }
    write_manifest(sc, "synthesize", out_dir, extra);
    return 0;
}

int cmd_acf(const Scenario& sc, const std::string& out_dir, int threads) {
    ensure_dir(out_dir);
    if (sc.model != Model::Scalar3D)
        throw ConfigError("cmd_acf: requires the scalar 3D model");
    const SynthesisConfig config = sc.make_config();
    // Receive line along x at lambda/8 spacing; lags are its multiples.
    std::vector<SpatialPoint> receivers;
    for (int i = 0; i < 13; ++i)
        receivers.push_back({i * sc.medium.lambda / 8.0, 0.0, 0.0});
    const std::vector<SpatialPoint> sources{{0.0, 0.0, 0.0}};
    std::vector<ChannelRealization> reals;
    reals.reserve(sc.n_realizations);
    simulate_realizations(config, sc.n_realizations, sources, receivers,
                          [&](const ChannelRealization& r) {
                              reals.push_back(r);
                          },
                          threads);
    std::vector<SpatialPoint> lags;
    for (int i = 0; i < 13; ++i)
        lags.push_back({i * sc.medium.lambda / 8.0, 0.0, 0.0});
    const AcfEstimate est = empirical_acf(reals, lags, Side::Receive);

    const bool iso =
        sc.receive_angular.kind == AngularDistribution::Kind::Isotropic;
    std::string csv = iso ? "lag_lambda,correlation,clarke\n"
                          : "lag_lambda,correlation\n";
    double max_dev = 0.0;
    json jlags = json::array(), jvals = json::array();
    for (std::size_t l = 0; l < lags.size(); ++l) {
        const double ll = lags[l].x / sc.medium.lambda;
        const double c = est.values[l].real();
        csv += fmt(ll) + "," + fmt(c);
        if (iso) {
            const double ref = clarke_acf(lags[l].x, sc.medium);
            csv += "," + fmt(ref);
            max_dev = std::max(max_dev, std::fabs(c - ref));
        }
        csv += "\n";
        jlags.push_back(ll);
        jvals.push_back({est.values[l].real(), est.values[l].imag()});
    }
    write_file(out_dir + "/acf.csv", csv);
    json rep;
    rep["lags_lambda"] = jlags;
    rep["values"] = jvals;
    rep["stderr"] = est.stderr_.front();
    rep["n_realizations"] = est.n_realizations;
    if (iso) rep["max_abs_deviation_from_clarke"] = max_dev;
    write_file(out_dir + "/acf.json", rep.dump(2) + "\n");
    json extra;
    extra["files"] = {{"csv", "acf.csv"}, {"json", "acf.json"}};
    extra["grid"] = disk_grid_to_json(*config.grid_r);
    write_manifest(sc, "acf", out_dir, extra);
    return 0;
}

namespace {

struct CheckResult {
    std::string test;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    long long n = 0;
};

CheckResult check_weyl3d(const MediumParams& m) {
    CheckResult r{"weyl3d", 0.0, 1e-3, false, 1024};
    const double l = m.lambda;
    for (double z : {l, 2.0 * l, 5.0 * l})
        r.statistic = std::max(
            r.statistic, weyl_check_3d(0.0, 0.0, z, 4.0 * m.kappa, 1024, m));
    r.statistic = std::max(r.statistic, weyl_check_3d(l / 2.0, l / 3.0, l,
                                                      4.0 * m.kappa, 1024, m));
    r.pass = r.statistic < r.threshold;
    return r;
}

CheckResult check_weyl2d(const MediumParams& m) {
    CheckResult r{"weyl2d", 0.0, 1e-3, false, 512};
    const double l = m.lambda;
    for (double y : {l, 2.0 * l, 5.0 * l})
        for (double x : {0.0, l / 2.0})
            r.statistic = std::max(
                r.statistic, weyl_check_2d(x, y, 4.0 * m.kappa, 512, m));
    r.pass = r.statistic < r.threshold;
    return r;
}

CheckResult check_disk_area(const Scenario& sc) {
    const DiskGrid g = build_disk_grid(sc.medium, GridMode::Polar, 64, 64,
                                       1e-3 * sc.medium.kappa);
    const double rmax = sc.medium.kappa - g.rim_cut;
    const double exact = pi * rmax * rmax;
    CheckResult r{"disk_area", std::fabs(g.weight_sum() / exact - 1.0), 1e-12,
                  false, static_cast<long long>(g.nodes.size())};
    r.pass = r.statistic < r.threshold;
    return r;
}

CheckResult check_norm(const Scenario& sc) {
    CheckResult r{"normalization", 0.0, 1e-6, false, 512};
    r.statistic = std::max(check_normalization(sc.receive_angular),
                           check_normalization(sc.source_angular));
    r.pass = r.statistic < r.threshold;
    return r;
}

// Adds a coherent evanescent component (transverse wavenumber 1.5*kappa) to
// each receiver; its z decay breaks wide-sense stationarity.
void inject_evanescent(std::vector<ChannelRealization>& reals,
                       const Scenario& sc) {
    const double k_off = 1.5 * sc.medium.kappa;
    const double decay =
        std::sqrt(k_off * k_off - sc.medium.kappa * sc.medium.kappa);
    for (auto& real : reals) {
        const std::uint64_t key =
            stream_key(sc.seed, kStreamScenario, real.realization);
        const cplx w = cn01(key, 0) * std::sqrt(2.0);
        const std::size_t ps = real.sources.size();
        for (std::size_t p = 0; p < real.receivers.size(); ++p) {
            const auto& pt = real.receivers[p];
            const double ph = k_off * pt.x;
            const cplx add = w * std::exp(-decay * pt.z) *
                             cplx{std::cos(ph), std::sin(ph)};
            for (std::size_t q = 0; q < ps; ++q) real.h[p * ps + q] += add;
        }
    }
}

}  // namespace

int cmd_validate(const Scenario& sc, const std::string& out_dir, int threads,
                 const std::string& only) {
    ensure_dir(out_dir);
    const std::set<std::string> known{"weyl3d",       "weyl2d",
                                      "disk_area",    "normalization",
                                      "power",        "gaussianity",
                                      "stationarity", "reciprocity"};
    if (!only.empty() && !known.count(only))
        throw ConfigError("cmd_validate: unknown check " + only);
    auto enabled = [&](const std::string& name) {
        return only.empty() || only == name;
    };
    std::vector<CheckResult> results;

    if (enabled("weyl3d")) results.push_back(check_weyl3d(sc.medium));
    if (enabled("weyl2d")) results.push_back(check_weyl2d(sc.medium));
    if (enabled("disk_area")) results.push_back(check_disk_area(sc));
    if (enabled("normalization")) results.push_back(check_norm(sc));

    const bool needs_field = enabled("power") || enabled("gaussianity") ||
                             enabled("stationarity");
    if (needs_field) {
        Scenario field = sc;
        field.model = Model::Scalar3D;
        const SynthesisConfig config = field.make_config();
        const double l = sc.medium.lambda;
        // Half-wavelength spacing keeps the samples nearly independent for
        // the Gaussianity and power checks; the last two points repeat the
        // first displacement at another location and height for the
        // stationarity comparison.
        const std::vector<SpatialPoint> receivers{
            {0.0, 0.0, 0.0},          {0.5 * l, 0.0, 0.0},
            {1.0 * l, 0.0, 0.0},      {1.5 * l, 0.0, 0.0},
            {0.2 * l, 0.7 * l, 0.1 * l}, {0.7 * l, 0.7 * l, 0.1 * l}};
        const std::vector<SpatialPoint> sources{{0.0, 0.0, 0.0}};
        const int n_real = std::max(sc.n_realizations, 400);
        std::vector<ChannelRealization> reals;
        reals.reserve(n_real);
        simulate_realizations(config, n_real, sources, receivers,
                              [&](const ChannelRealization& r) {
                                  reals.push_back(r);
                              },
                              threads);
        if (sc.inject_off_disk_node) inject_evanescent(reals, sc);

        if (enabled("power")) {
            double p = 0.0;
            for (const auto& r : reals)
                for (int i = 0; i < 4; ++i) p += std::norm(r.h[i]);
            p /= 4.0 * reals.size();
            CheckResult r{"power", std::fabs(p / sc.target_power - 1.0), 0.15,
                          false, static_cast<long long>(4 * reals.size())};
            r.pass = r.statistic < r.threshold;
            results.push_back(r);
        }
        if (enabled("gaussianity")) {
            std::vector<cplx> samples;
            samples.reserve(4 * reals.size());
            for (const auto& r : reals)
                for (int i = 0; i < 4; ++i) samples.push_back(r.h[i]);
            const GaussianityReport g = gaussianity_test(samples);
            CheckResult r{"gaussianity",
                          std::max(g.ks_re, g.ks_im), g.ks_critical, g.pass,
                          static_cast<long long>(samples.size())};
            results.push_back(r);
        }
        if (enabled("stationarity")) {
            const StationarityReport s =
                stationarity_test(reals, {{1, 0}, {5, 4}});
            CheckResult r{"stationarity", s.max_discrepancy_sigma, 5.0, s.pass,
                          static_cast<long long>(reals.size())};
            results.push_back(r);
        }
    }

    if (enabled("reciprocity")) {
        SynthesisConfig config;
        config.medium = sc.medium;
        auto grid = std::make_shared<DiskGrid>(build_disk_grid(
            sc.medium, GridMode::Polar, 16, 16, 1e-3 * sc.medium.kappa));
        config.grid_r = grid;
        config.grid_s = grid;
        config.factor = SpectralFactor::isotropic();
        config.seed = sc.seed;
        config.enforce_reciprocity = true;
        const double l = sc.medium.lambda;
        const std::vector<SpatialPoint> pts{{0.0, 0.0, 0.0},
                                            {0.3 * l, 0.0, 0.0},
                                            {0.1 * l, 0.6 * l, 0.0},
                                            {1.1 * l, 0.2 * l, 0.0},
                                            {0.4 * l, 1.4 * l, 0.0}};
        const AngularResponseGrid resp = draw_angular_response(config, 0);
        const ChannelRealization h = synthesize(resp, pts, pts);
        double err = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p)
            for (std::size_t q = 0; q < pts.size(); ++q)
                err = std::max(err, std::abs(h.h[p * pts.size() + q] -
                                             h.h[q * pts.size() + p]));
        CheckResult r{"reciprocity", err, 1e-10, err < 1e-10,
                      static_cast<long long>(pts.size())};
        results.push_back(r);
    }

    json rep = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        rep.push_back({{"test", r.test},
                       {"statistic", r.statistic},
                       {"threshold", r.threshold},
                       {"pass", r.pass},
                       {"n", r.n},
                       {"seed", sc.seed}});
        all_pass = all_pass && r.pass;
    }
    write_file(out_dir + "/report.json", rep.dump(2) + "\n");
    write_manifest(sc, "validate", out_dir,
                   json{{"files", {{"json", "report.json"}}},
                        {"all_pass", all_pass}});
    return all_pass ? 0 : 1;
}

int cmd_angular(const Scenario& sc, const std::string& out_dir, int theta_res,
                int phi_res) {
    ensure_dir(out_dir);
    std::string csv = "theta,phi,p_sin_theta\n";
    const double dt = (pi / 2.0) / theta_res, dp = (2.0 * pi) / phi_res;
    for (int it = 0; it < theta_res; ++it) {
        const double theta = (it + 0.5) * dt;
        for (int ip = 0; ip < phi_res; ++ip) {
            const double phi = (ip + 0.5) * dp;
            const double p =
                angular_density(sc.receive_angular,
                                spherical_to_cosine({theta, phi})) *
                std::sin(theta);
            csv += fmt(theta) + "," + fmt(phi) + "," + fmt(p) + "\n";
        }
    }
    write_file(out_dir + "/angular.csv", csv);
    write_manifest(sc, "angular", out_dir,
                   json{{"files", {{"csv", "angular.csv"}}},
                        {"theta_res", theta_res},
                        {"phi_res", phi_res}});
    return 0;
}

}  // namespace pw
