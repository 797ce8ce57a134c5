// SPDX-License-Identifier: Apache-2.0

#include "planewave/synthesis.hpp"

#include <cmath>
#include <thread>

#include "planewave/errors.hpp"
#include "planewave/rng.hpp"

namespace pw {

namespace {

constexpr std::size_t kOutputGuard = std::size_t(1) << 26;

Direction3 node_direction(const DiskNode& n, const MediumParams& medium) {
    return {n.kx / medium.kappa, n.ky / medium.kappa, n.gamma / medium.kappa};
}

// Per-node separable amplitude root: sqrt(p * weight / gamma). The per-pair
// standard deviation of the weighted synthesis cell is
// (1/(2*pi)^2) * (kappa*eta/2) * A_ij * sqrt(w_i w_j / (gamma_i gamma_j)).
std::vector<double> side_roots(const DiskGrid& grid,
                               const AngularDistribution* dist,
                               const MediumParams& medium) {
    std::vector<double> u(grid.nodes.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const auto& n = grid.nodes[i];
        const double p = dist ? angular_density(*dist, node_direction(n, medium))
                              : 1.0 / (2.0 * pi);
        u[i] = std::sqrt(p * n.weight / n.gamma);
    }
    return u;
}

struct PairAmplitude {
    // c_ij = base * u[i] * v[j] for factorized forms, or coupled row access.
    double base = 0.0;
    std::vector<double> u, v;
    const SpectralFactor* coupled = nullptr;
    const DiskGrid* grid_r = nullptr;
    const DiskGrid* grid_s = nullptr;

    double at(std::size_t i, std::size_t j) const {
        if (!coupled) return base * u[i] * v[j];
        const std::size_t ms = grid_s->nodes.size();
        const auto& nr = grid_r->nodes[i];
        const auto& ns = grid_s->nodes[j];
        return base * coupled->scale * coupled->values[i * ms + j] *
               std::sqrt(nr.weight * ns.weight / (nr.gamma * ns.gamma));
    }
};

PairAmplitude pair_amplitude(const SynthesisConfig& config) {
    const auto& medium = config.medium;
    const double prefactor =
        (medium.kappa * medium.eta / 2.0) / std::pow(2.0 * pi, 2);
    PairAmplitude amp;
    amp.grid_r = config.grid_r.get();
    amp.grid_s = config.grid_s.get();
    switch (config.factor.form) {
        case SpectralFactor::Form::IsotropicUnitPower:
            amp.base = prefactor * config.factor.scale * 4.0 * pi /
                       (medium.kappa * medium.kappa * medium.eta) * 2.0 * pi;
            // The 2*pi folds the isotropic density 1/(2*pi) out of the
            // side roots below, which use p = 1/(2*pi).
            amp.u = side_roots(*config.grid_r, nullptr, medium);
            amp.v = side_roots(*config.grid_s, nullptr, medium);
            break;
        case SpectralFactor::Form::Separable:
            amp.base = prefactor * config.factor.scale * 8.0 * pi * pi /
                       (medium.kappa * medium.kappa * medium.eta);
            amp.u = side_roots(*config.grid_r, &config.factor.receive, medium);
            amp.v = side_roots(*config.grid_s, &config.factor.source, medium);
            break;
        case SpectralFactor::Form::Coupled:
            amp.base = prefactor;
            amp.coupled = &config.factor;
            break;
    }
    return amp;
}

void validate_config(const SynthesisConfig& config) {
    if (!config.grid_r || !config.grid_s)
        throw ConfigError("synthesis: missing disk grids");
    if (config.enforce_reciprocity) {
        if (config.model != Model::Scalar3D)
            throw ConfigError(
                "synthesis: reciprocity symmetrization is defined for the "
                "scalar model");
        if (config.grid_r.get() != config.grid_s.get())
            throw ConfigError(
                "synthesis: reciprocity requires one shared grid for source "
                "and receive");
        for (const auto& n : config.grid_r->nodes)
            if (n.neg_index < 0)
                throw ConfigError(
                    "synthesis: reciprocity requires a negation-closed grid");
    }
}

// Gaussian for cell (i,j), optionally symmetrized with the cell at
// (-kappa, -k) and rescaled to preserve variance.
inline cplx cell_noise(std::uint64_t key, std::size_t i, std::size_t j,
                       std::size_t ms, const DiskGrid* recip_grid) {
    const cplx w = cn01(key, i * ms + j);
    if (!recip_grid) return w;
    const std::size_t mi = recip_grid->nodes[j].neg_index;
    const std::size_t mj = recip_grid->nodes[i].neg_index;
    const cplx w2 = cn01(key, mi * ms + mj);
    return (w + w2) / std::sqrt(2.0);
}

std::vector<cplx> receive_phases(const DiskGrid& grid,
                                 const std::vector<SpatialPoint>& pts,
                                 double z_sign) {
    std::vector<cplx> a(grid.nodes.size() * pts.size());
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const auto& n = grid.nodes[i];
        for (std::size_t p = 0; p < pts.size(); ++p) {
            const double ph = n.kx * pts[p].x + n.ky * pts[p].y +
                              z_sign * n.gamma * pts[p].z;
            a[i * pts.size() + p] = {std::cos(ph), std::sin(ph)};
        }
    }
    return a;
}

std::vector<cplx> source_phases(const DiskGrid& grid,
                                const std::vector<SpatialPoint>& pts,
                                double z_sign) {
    std::vector<cplx> a(grid.nodes.size() * pts.size());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        const auto& n = grid.nodes[j];
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const double ph = -(n.kx * pts[q].x + n.ky * pts[q].y +
                                z_sign * n.gamma * pts[q].z);
            a[j * pts.size() + q] = {std::cos(ph), std::sin(ph)};
        }
    }
    return a;
}

}  // namespace

AngularResponseGrid draw_angular_response(const SynthesisConfig& config,
                                          std::uint64_t realization) {
    validate_config(config);
    const auto& gr = *config.grid_r;
    const auto& gs = *config.grid_s;
    const std::size_t mr = gr.nodes.size(), ms = gs.nodes.size();
    if (mr * ms > kCoupledGuard)
        throw ResourceGuard("draw_angular_response: grid pair exceeds the "
                            "memory guard");
    const PairAmplitude amp = pair_amplitude(config);
    // Stored values exclude the synthesis prefactor 1/(2*pi)^2 that amp.at
    // carries, and exclude the quadrature weights.
    const double norm = std::pow(2.0 * pi, 2);
    const std::uint64_t key = stream_key(config.seed, kStreamPP, realization);
    const DiskGrid* recip =
        config.enforce_reciprocity ? config.grid_r.get() : nullptr;

    AngularResponseGrid resp;
    resp.grid_r = config.grid_r;
    resp.grid_s = config.grid_s;
    resp.seed = config.seed;
    resp.realization = realization;
    resp.values.resize(mr * ms);
    for (std::size_t i = 0; i < mr; ++i) {
        const double wi = gr.nodes[i].weight;
        for (std::size_t j = 0; j < ms; ++j) {
            const double wj = gs.nodes[j].weight;
            const cplx w = cell_noise(key, i, j, ms, recip);
            // amp.at includes the synthesis prefactor 1/(2*pi)^2 and the
            // sqrt of both weights; stored responses carry neither, so
            // E{|value|^2 * w_i * w_j} equals the 4D spectral density.
            resp.values[i * ms + j] = amp.at(i, j) * norm / (wi * wj) * w;
        }
    }
    return resp;
}

ChannelRealization synthesize(const AngularResponseGrid& resp,
                              const std::vector<SpatialPoint>& sources,
                              const std::vector<SpatialPoint>& receivers) {
    const auto& gr = *resp.grid_r;
    const auto& gs = *resp.grid_s;
    const std::size_t mr = gr.nodes.size(), ms = gs.nodes.size();
    const std::size_t pr = receivers.size(), ps = sources.size();
    if (pr * ps > kOutputGuard)
        throw ResourceGuard("synthesize: output matrix exceeds the memory guard");
    const auto ar = receive_phases(gr, receivers, +1.0);
    const auto as = source_phases(gs, sources, +1.0);
    ChannelRealization out;
    out.receivers = receivers;
    out.sources = sources;
    out.seed = resp.seed;
    out.realization = resp.realization;
    out.h.assign(pr * ps, {0.0, 0.0});
    const double pref = 1.0 / std::pow(2.0 * pi, 2);
    std::vector<cplx> y(ps);
    for (std::size_t i = 0; i < mr; ++i) {
        const double wi = gr.nodes[i].weight;
        std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
        for (std::size_t j = 0; j < ms; ++j) {
            const cplx hw = resp.values[i * ms + j] * gs.nodes[j].weight;
            for (std::size_t q = 0; q < ps; ++q)
                y[q] += hw * as[j * ps + q];
        }
        for (std::size_t p = 0; p < pr; ++p) {
            const cplx arp = ar[i * pr + p] * (pref * wi);
            for (std::size_t q = 0; q < ps; ++q)
                out.h[p * ps + q] += arp * y[q];
        }
    }
    return out;
}

cplx spectral_response(const AngularResponseGrid& resp, int i, int j,
                       double r_z, double s_z) {
    const auto& gr = *resp.grid_r;
    const auto& gs = *resp.grid_s;
    if (i < 0 || j < 0 || i >= (int)gr.nodes.size() || j >= (int)gs.nodes.size())
        throw ConfigError("spectral_response: node pair off the support");
    const double ph = gr.nodes[i].gamma * r_z - gs.nodes[j].gamma * s_z;
    return resp.values[static_cast<std::size_t>(i) * gs.nodes.size() + j] *
           cplx{std::cos(ph), std::sin(ph)};
}

int find_node(const DiskGrid& grid, double kx, double ky, double tol) {
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (std::fabs(grid.nodes[i].kx - kx) <= tol &&
            std::fabs(grid.nodes[i].ky - ky) <= tol)
            return static_cast<int>(i);
    }
    return -1;
}

cplx system_function_shift(const AngularResponseGrid& resp, int i, int j,
                           double r_z, double s_z) {
    const auto& gr = *resp.grid_r;
    const auto& gs = *resp.grid_s;
    const auto& nk = gr.nodes.at(i);
    const auto& nq = gs.nodes.at(j);
    const int si = find_node(gr, nk.kx - nq.kx, nk.ky - nq.ky);
    const int sj = find_node(gs, -nq.kx, -nq.ky);
    if (si < 0 || sj < 0)
        throw ConfigError("system_function_shift: shifted arguments off-grid");
    return spectral_response(resp, si, sj, r_z, r_z - s_z);
}

cplx mixed_receive_response(const AngularResponseGrid& resp,
                            const SpatialPoint& r, int j, double s_z) {
    const auto& gr = *resp.grid_r;
    const auto& gs = *resp.grid_s;
    const double pref = 1.0 / std::pow(2.0 * pi, 2);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const auto& n = gr.nodes[i];
        const double ph = n.kx * r.x + n.ky * r.y + n.gamma * r.z;
        acc += cplx{std::cos(ph), std::sin(ph)} *
               resp.values[i * gs.nodes.size() + j] * n.weight;
    }
    const double mph = -gs.nodes.at(j).gamma * s_z;
    return pref * acc * cplx{std::cos(mph), std::sin(mph)};
}

cplx lsv_impulse_response(const ChannelRealization& real, const SpatialPoint& r,
                          const SpatialPoint& p) {
    const SpatialPoint s = r - p;
    auto match = [](const SpatialPoint& a, const SpatialPoint& b) {
        return std::fabs(a.x - b.x) < 1e-9 && std::fabs(a.y - b.y) < 1e-9 &&
               std::fabs(a.z - b.z) < 1e-9;
    };
    int pi_ = -1, qi = -1;
    for (std::size_t i = 0; i < real.receivers.size(); ++i)
        if (match(real.receivers[i], r)) pi_ = static_cast<int>(i);
    for (std::size_t q = 0; q < real.sources.size(); ++q)
        if (match(real.sources[q], s)) qi = static_cast<int>(q);
    if (pi_ < 0 || qi < 0)
        throw ConfigError("lsv_impulse_response: points not in the realization");
    return real.h[static_cast<std::size_t>(pi_) * real.sources.size() + qi];
}

ChannelRealization simulate_one(const SynthesisConfig& config,
                                std::uint64_t realization,
                                const std::vector<SpatialPoint>& sources,
                                const std::vector<SpatialPoint>& receivers) {
    validate_config(config);
    if (config.model == Model::Scalar2D)
        throw ConfigError("simulate_one: use synthesize_2d for the 2D model");
    const auto& gr = *config.grid_r;
    const auto& gs = *config.grid_s;
    const std::size_t mr = gr.nodes.size(), ms = gs.nodes.size();
    const std::size_t pr = receivers.size(), ps = sources.size();
    if (pr * ps > kOutputGuard)
        throw ResourceGuard("simulate_one: output matrix exceeds the memory "
                            "guard");
    const PairAmplitude amp = pair_amplitude(config);

    ChannelRealization out;
    out.receivers = receivers;
    out.sources = sources;
    out.seed = config.seed;
    out.realization = realization;
    out.h.assign(pr * ps, {0.0, 0.0});

    const bool scalar = config.model == Model::Scalar3D;
    if (scalar && !config.enforce_reciprocity && ps == 1 && !amp.coupled) {
        // Exact marginalization: with one source point the weighted sum of
        // independent source-node Gaussians is itself Gaussian, so one draw
        // per receive node reproduces the joint law of h over the receivers.
        double v2 = 0.0;
        for (double vj : amp.v) v2 += vj * vj;
        const double vnorm = std::sqrt(v2);
        const std::uint64_t key =
            stream_key(config.seed, kStreamPP, realization);
        const auto ar = receive_phases(gr, receivers, +1.0);
        for (std::size_t i = 0; i < mr; ++i) {
            const cplx y = cn01(key, i) * (amp.base * amp.u[i] * vnorm);
            for (std::size_t p = 0; p < pr; ++p)
                out.h[p] += ar[i * pr + p] * y;
        }
        return out;
    }

    const DiskGrid* recip =
        config.enforce_reciprocity ? config.grid_r.get() : nullptr;
    std::vector<cplx> y(ps);
    for (int bi = 0; bi < (scalar ? 1 : 2); ++bi) {
        for (int bj = 0; bj < (scalar ? 1 : 2); ++bj) {
            const double gain = scalar ? 1.0 : config.block_gain[bi][bj];
            if (gain < 0.0)
                throw ConfigError("simulate_one: negative block gain");
            if (gain == 0.0) continue;
            const std::uint64_t stream =
                static_cast<std::uint64_t>(kStreamPP + 2 * bi + bj);
            const std::uint64_t key =
                stream_key(config.seed, stream, realization);
            const auto ar =
                receive_phases(gr, receivers, bi == 0 ? +1.0 : -1.0);
            const auto as = source_phases(gs, sources, bj == 0 ? +1.0 : -1.0);
            for (std::size_t i = 0; i < mr; ++i) {
                std::fill(y.begin(), y.end(), cplx{0.0, 0.0});
                for (std::size_t j = 0; j < ms; ++j) {
                    const cplx w = cell_noise(key, i, j, ms, recip);
                    const double c = gain * amp.at(i, j);
                    for (std::size_t q = 0; q < ps; ++q)
                        y[q] += (c * w) * as[j * ps + q];
                }
                for (std::size_t p = 0; p < pr; ++p) {
                    const cplx arp = ar[i * pr + p];
                    for (std::size_t q = 0; q < ps; ++q)
                        out.h[p * ps + q] += arp * y[q];
                }
            }
        }
    }
    return out;
}

void simulate_realizations(
    const SynthesisConfig& config, int n_realizations,
    const std::vector<SpatialPoint>& sources,
    const std::vector<SpatialPoint>& receivers,
    const std::function<void(const ChannelRealization&)>& sink, int threads) {
    if (n_realizations <= 0)
        throw ConfigError("simulate_realizations: need at least one realization");
    if (threads <= 1) {
        for (int t = 0; t < n_realizations; ++t)
            sink(simulate_one(config, t, sources, receivers));
        return;
    }
    std::vector<ChannelRealization> slots(n_realizations);
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid) {
        pool.emplace_back([&, tid] {
            for (int t = tid; t < n_realizations; t += threads)
                slots[t] = simulate_one(config, t, sources, receivers);
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& r : slots) sink(r);
}

ChannelRealization synthesize_complete(const SynthesisConfig& config,
                                       std::uint64_t realization,
                                       const std::vector<SpatialPoint>& sources,
                                       const std::vector<SpatialPoint>& receivers) {
    SynthesisConfig c = config;
    c.model = Model::Complete3D;
    return simulate_one(c, realization, sources, receivers);
}

ChannelRealization synthesize_2d(const Synthesis2DConfig& config,
                                 std::uint64_t realization,
                                 const std::vector<SpatialPoint>& sources,
                                 const std::vector<SpatialPoint>& receivers,
                                 bool polar_path) {
    if (config.n_nodes < 4)
        throw ConfigError("synthesize_2d: need at least 4 nodes");
    if (!(config.theta_max > config.theta_min))
        throw ConfigError("synthesize_2d: empty angular interval");
    if (!config.density) throw ConfigError("synthesize_2d: missing density");
    const int n = config.n_nodes;
    const double dt = (config.theta_max - config.theta_min) / n;
    const double kappa = config.medium.kappa;
    const std::uint64_t key = stream_key(config.seed, kStreamPP, realization);

    ChannelRealization out;
    out.receivers = receivers;
    out.sources = sources;
    out.seed = config.seed;
    out.realization = realization;
    out.h.assign(receivers.size() * sources.size(), {0.0, 0.0});

    std::vector<double> theta(n);
    for (int m = 0; m < n; ++m) theta[m] = config.theta_min + (m + 0.5) * dt;

    // Per-cell standard deviation sqrt(p) * dtheta; the angular prefactor and
    // the gamma roots cancel against the unit-power pinning of the density.
    for (int m = 0; m < n; ++m) {
        const double cr = std::cos(theta[m]), sr = std::sin(theta[m]);
        for (int nn = 0; nn < n; ++nn) {
            const double cs = std::cos(theta[nn]), ss = std::sin(theta[nn]);
            const double p = config.density(theta[m], theta[nn]);
            if (p < 0.0) throw ConfigError("synthesize_2d: negative density");
            if (p == 0.0) continue;
            const cplx g = cn01(key, static_cast<std::uint64_t>(m) * n + nn) *
                           (std::sqrt(p) * dt);
            for (std::size_t pr_ = 0; pr_ < receivers.size(); ++pr_) {
                const auto& r = receivers[pr_];
                const double phr = polar_path
                                       ? kappa * (r.x * cr + r.y * sr)
                                       : (kappa * cr) * r.x + (kappa * sr) * r.y;
                const cplx arp{std::cos(phr), std::sin(phr)};
                for (std::size_t q = 0; q < sources.size(); ++q) {
                    const auto& s = sources[q];
                    // The cosine-direction form uses the +i source sign of
                    // the 2D representation; the polar form uses -i.
                    const double phs =
                        polar_path ? -kappa * (s.x * cs + s.y * ss)
                                   : (kappa * cs) * s.x + (kappa * ss) * s.y;
                    out.h[pr_ * sources.size() + q] +=
                        arp * g * cplx{std::cos(phs), std::sin(phs)};
                }
            }
        }
    }
    return out;
}

ChannelRealization freespace_reference(const std::vector<SpatialPoint>& sources,
                                       const std::vector<SpatialPoint>& receivers,
                                       const MediumParams& medium) {
    ChannelRealization out;
    out.receivers = receivers;
    out.sources = sources;
    out.h.resize(receivers.size() * sources.size());
    const cplx scale = cplx{0.0, -1.0} * medium.kappa * medium.eta;
    for (std::size_t p = 0; p < receivers.size(); ++p)
        for (std::size_t q = 0; q < sources.size(); ++q)
            out.h[p * sources.size() + q] =
                scale * green3(receivers[p] - sources[q], medium);
    return out;
}

ChannelRealization synthesize_rays(const std::vector<Ray>& rays,
                                   const MediumParams& medium,
                                   std::uint64_t seed, std::uint64_t realization,
                                   const std::vector<SpatialPoint>& sources,
                                   const std::vector<SpatialPoint>& receivers,
                                   bool random_phases) {
    if (rays.empty()) throw ConfigError("synthesize_rays: empty ray list");
    ChannelRealization out;
    out.receivers = receivers;
    out.sources = sources;
    out.seed = seed;
    out.realization = realization;
    out.h.assign(receivers.size() * sources.size(), {0.0, 0.0});
    const std::uint64_t key = stream_key(seed, kStreamPP, realization);
    for (std::size_t jr = 0; jr < rays.size(); ++jr) {
        const auto& ray = rays[jr];
        cplx w{1.0, 0.0};
        if (random_phases) {
            const double a = 2.0 * pi * to_u01(counter_u64(key, jr));
            w = {std::cos(a), std::sin(a)};
        }
        const double amp = std::sqrt(ray.gain);
        for (std::size_t p = 0; p < receivers.size(); ++p) {
            const auto& r = receivers[p];
            const double phr = medium.kappa * (ray.receive_dir.x * r.x +
                                               ray.receive_dir.y * r.y +
                                               ray.receive_dir.z * r.z);
            const cplx arp = cplx{std::cos(phr), std::sin(phr)} * (amp * w);
            for (std::size_t q = 0; q < sources.size(); ++q) {
                const auto& s = sources[q];
                const double phs = -medium.kappa * (ray.source_dir.x * s.x +
                                                    ray.source_dir.y * s.y +
                                                    ray.source_dir.z * s.z);
                out.h[p * sources.size() + q] +=
                    arp * cplx{std::cos(phs), std::sin(phs)};
            }
        }
    }
    return out;
}

}  // namespace pw
