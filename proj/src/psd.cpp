// SPDX-License-Identifier: Apache-2.0

#include "planewave/psd.hpp"

#include <cmath>

#include "planewave/errors.hpp"

namespace pw {

namespace {

Direction3 node_direction(const DiskNode& n, const MediumParams& medium) {
    return {n.kx / medium.kappa, n.ky / medium.kappa, n.gamma / medium.kappa};
}

// Separable amplitude constant pinned so that hemisphere-normalized
// densities give unit continuum power: A = c * sqrt(p_r * p_s) with
// c = 8*pi^2/(kappa^2*eta).
double separable_const(const MediumParams& medium) {
    return 8.0 * pi * pi / (medium.kappa * medium.kappa * medium.eta);
}

// Isotropic constant with unit continuum power; equals the separable
// constant times the isotropic density 1/(2*pi).
double isotropic_const(const MediumParams& medium) {
    return 4.0 * pi / (medium.kappa * medium.kappa * medium.eta);
}

void check_density_form(const AngularDistribution& d, const char* side) {
    if (d.kind == AngularDistribution::Kind::Discrete)
        throw ConfigError(std::string("spectral factor: ") + side +
                          " distribution is impulsive; use the ray synthesis "
                          "path instead");
}

}  // namespace

SpectralFactor SpectralFactor::isotropic() {
    SpectralFactor f;
    f.form = Form::IsotropicUnitPower;
    return f;
}

SpectralFactor SpectralFactor::separable(AngularDistribution receive,
                                         AngularDistribution source) {
    check_density_form(receive, "receive");
    check_density_form(source, "source");
    SpectralFactor f;
    f.form = Form::Separable;
    f.receive = std::move(receive);
    f.source = std::move(source);
    return f;
}

SpectralFactor SpectralFactor::coupled(std::shared_ptr<const DiskGrid> grid_r,
                                       std::shared_ptr<const DiskGrid> grid_s,
                                       std::vector<double> values) {
    if (!grid_r || !grid_s) throw ConfigError("coupled factor: missing grids");
    const std::size_t need = grid_r->nodes.size() * grid_s->nodes.size();
    if (need > kCoupledGuard)
        throw ResourceGuard("coupled factor: grid pair exceeds the memory guard");
    if (values.size() != need)
        throw ConfigError("coupled factor: value count does not match grids");
    for (double v : values)
        if (v < 0.0) throw ConfigError("coupled factor: negative value");
    SpectralFactor f;
    f.form = Form::Coupled;
    f.grid_r = std::move(grid_r);
    f.grid_s = std::move(grid_s);
    f.values = std::move(values);
    return f;
}

double isotropic_spectral_factor_sq(const MediumParams& medium) {
    return 2.0 * pi * pi / medium.kappa;
}

double factor_value(const SpectralFactor& f, double kx, double ky, double qx,
                    double qy, const MediumParams& medium) {
    switch (f.form) {
        case SpectralFactor::Form::IsotropicUnitPower:
            return f.scale * isotropic_const(medium);
        case SpectralFactor::Form::Separable: {
            const double gk = gamma_of(kx, ky, medium).value_or(-1.0);
            const double gq = gamma_of(qx, qy, medium).value_or(-1.0);
            if (gk < 0.0 || gq < 0.0)
                throw ConfigError("factor_value: wavenumbers outside the disk");
            const Direction3 dk{kx / medium.kappa, ky / medium.kappa,
                                gk / medium.kappa};
            const Direction3 dq{qx / medium.kappa, qy / medium.kappa,
                                gq / medium.kappa};
            const double p = angular_density(f.receive, dk) *
                             angular_density(f.source, dq);
            return f.scale * separable_const(medium) * std::sqrt(p);
        }
        case SpectralFactor::Form::Coupled:
            throw ConfigError(
                "factor_value: coupled factors are grid-indexed; use "
                "factor_value_at");
    }
    return 0.0;
}

double factor_value_at(const SpectralFactor& f, const DiskGrid& grid_r, int i,
                       const DiskGrid& grid_s, int j,
                       const MediumParams& medium) {
    if (f.form == SpectralFactor::Form::Coupled) {
        return f.scale * f.values[static_cast<std::size_t>(i) *
                                      f.grid_s->nodes.size() +
                                  j];
    }
    const auto& nr = grid_r.nodes[i];
    const auto& ns = grid_s.nodes[j];
    if (f.form == SpectralFactor::Form::IsotropicUnitPower)
        return f.scale * isotropic_const(medium);
    const double p = angular_density(f.receive, node_direction(nr, medium)) *
                     angular_density(f.source, node_direction(ns, medium));
    return f.scale * separable_const(medium) * std::sqrt(p);
}

double psd4(const SpectralFactor& f, double kx, double ky, double qx, double qy,
            const MediumParams& medium) {
    const auto gk = gamma_of(kx, ky, medium);
    const auto gq = gamma_of(qx, qy, medium);
    if (!gk || !gq || *gk <= 0.0 || *gq <= 0.0)
        throw ConfigError("psd4: wavenumbers must be strictly inside the disk");
    const double a = factor_value(f, kx, ky, qx, qy, medium);
    const double half = medium.kappa * medium.eta / 2.0;
    return half * half * a * a / (*gk * *gq);
}

double average_power(const SpectralFactor& f, const DiskGrid& grid_r,
                     const DiskGrid& grid_s, const MediumParams& medium) {
    const double half = medium.kappa * medium.eta / 2.0;
    const double pref = half * half / std::pow(2.0 * pi, 4);
    if (f.form == SpectralFactor::Form::Coupled) {
        const std::size_t ms = grid_s.nodes.size();
        double acc = 0.0;
        for (std::size_t i = 0; i < grid_r.nodes.size(); ++i) {
            const auto& nr = grid_r.nodes[i];
            double row = 0.0;
            for (std::size_t j = 0; j < ms; ++j) {
                const auto& ns = grid_s.nodes[j];
                const double a = f.values[i * ms + j];
                row += a * a * ns.weight / ns.gamma;
            }
            acc += row * nr.weight / nr.gamma;
        }
        return pref * f.scale * f.scale * acc;
    }
    // Separable forms factorize into two disk sums.
    double sr = 0.0, ss = 0.0;
    for (const auto& n : grid_r.nodes) {
        const double p = f.form == SpectralFactor::Form::IsotropicUnitPower
                             ? 1.0 / (2.0 * pi)
                             : angular_density(f.receive,
                                               node_direction(n, medium));
        sr += p * n.weight / n.gamma;
    }
    for (const auto& n : grid_s.nodes) {
        const double p = f.form == SpectralFactor::Form::IsotropicUnitPower
                             ? 1.0 / (2.0 * pi)
                             : angular_density(f.source,
                                               node_direction(n, medium));
        ss += p * n.weight / n.gamma;
    }
    const double c = f.scale * separable_const(medium);
    return pref * c * c * sr * ss;
}

double average_power_spherical(const SpectralFactor& f,
                               const MediumParams& medium, int theta_res,
                               int phi_res) {
    if (f.form == SpectralFactor::Form::Coupled)
        throw ConfigError(
            "average_power_spherical: requires a separable or isotropic factor");
    if (f.form == SpectralFactor::Form::IsotropicUnitPower)
        return f.scale * f.scale;
    const double dt = (pi / 2.0) / theta_res, dp = (2.0 * pi) / phi_res;
    double qr = 0.0, qs = 0.0;
    for (int it = 0; it < theta_res; ++it) {
        const double theta = (it + 0.5) * dt;
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int ip = 0; ip < phi_res; ++ip) {
            const double phi = (ip + 0.5) * dp;
            const Direction3 d{st * std::cos(phi), st * std::sin(phi), ct};
            qr += angular_density(f.receive, d) * st;
            qs += angular_density(f.source, d) * st;
        }
    }
    qr *= dt * dp;
    qs *= dt * dp;
    // The spherical-coordinate constant is pinned by requiring agreement of
    // the two power paths on the isotropic case; it comes out as exactly 1.
    return f.scale * f.scale * qr * qs;
}

SpectralFactor normalize_factor(SpectralFactor f, const DiskGrid& grid_r,
                                const DiskGrid& grid_s,
                                const MediumParams& medium, double target) {
    const double measured = average_power(f, grid_r, grid_s, medium);
    if (!(measured > 0.0))
        throw ConfigError("normalize_factor: factor has zero power");
    if (!(target > 0.0))
        throw ConfigError("normalize_factor: target power must be positive");
    f.scale *= std::sqrt(target / measured);
    return f;
}

SpectralFactor factor_from_6d(
    const std::function<double(const Direction3&, const Direction3&)>& a6,
    std::shared_ptr<const DiskGrid> grid_r,
    std::shared_ptr<const DiskGrid> grid_s, const MediumParams& medium) {
    const std::size_t mr = grid_r->nodes.size(), ms = grid_s->nodes.size();
    if (mr * ms > kCoupledGuard)
        throw ResourceGuard("factor_from_6d: grid pair exceeds the memory guard");
    std::vector<double> values(mr * ms);
    const double rescale = 1.0 / (2.0 * pi * medium.kappa * medium.eta);
    for (std::size_t i = 0; i < mr; ++i) {
        const Direction3 dr = node_direction(grid_r->nodes[i], medium);
        for (std::size_t j = 0; j < ms; ++j) {
            const Direction3 ds = node_direction(grid_s->nodes[j], medium);
            const double v = a6(dr, ds);
            if (v < 0.0)
                throw ConfigError("factor_from_6d: negative 6D factor value");
            values[i * ms + j] = v * rescale;
        }
    }
    return SpectralFactor::coupled(std::move(grid_r), std::move(grid_s),
                                   std::move(values));
}

double mercer_power_bound(const SpectralFactor& f, const DiskGrid& grid_r,
                          const DiskGrid& grid_s, const MediumParams& medium) {
    double sup = 0.0;
    if (f.form == SpectralFactor::Form::Coupled) {
        for (double v : f.values) sup = std::max(sup, f.scale * v);
    } else if (f.form == SpectralFactor::Form::IsotropicUnitPower) {
        sup = f.scale * isotropic_const(medium);
    } else {
        double pr = 0.0, ps = 0.0;
        for (const auto& n : grid_r.nodes)
            pr = std::max(pr,
                          angular_density(f.receive, node_direction(n, medium)));
        for (const auto& n : grid_s.nodes)
            ps = std::max(ps,
                          angular_density(f.source, node_direction(n, medium)));
        sup = f.scale * separable_const(medium) * std::sqrt(pr * ps);
    }
    const double b = medium.kappa * medium.kappa * medium.eta * sup / 8.0;
    return b * b;
}

AngularDistribution discrete_factor_from_rays(std::vector<Ray> rays) {
    return AngularDistribution::from_rays(std::move(rays));
}

}  // namespace pw
