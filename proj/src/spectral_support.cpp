// SPDX-License-Identifier: Apache-2.0

#include "planewave/spectral_support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "planewave/errors.hpp"

namespace pw {

double DiskGrid::min_gamma() const {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes) g = std::min(g, n.gamma);
    return g;
}

double DiskGrid::weight_sum() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.weight;
    return s;
}

bool AngularRegionSet::contains(double theta, double phi) const {
    for (const auto& r : rects) {
        if (theta >= r.theta_min && theta <= r.theta_max && phi >= r.phi_min &&
            phi <= r.phi_max)
            return true;
    }
    if (!caps.empty()) {
        const Direction3 d = spherical_to_cosine({theta, phi});
        for (const auto& c : caps) {
            const double dot =
                d.x * c.center.x + d.y * c.center.y + d.z * c.center.z;
            if (dot >= std::cos(c.half_angle)) return true;
        }
    }
    return false;
}

double bandwidth_isotropic(const MediumParams& medium) {
    return pi * medium.kappa * medium.kappa;
}

namespace {

double rasterized_integral(const AngularRegionSet& set, int theta_res,
                           int phi_res, bool disk_measure) {
    const double dt = (pi / 2.0) / theta_res;
    const double dp = (2.0 * pi) / phi_res;
    double acc = 0.0;
    for (int it = 0; it < theta_res; ++it) {
        const double theta = (it + 0.5) * dt;
        const double density =
            disk_measure ? hemisphere_jacobian(theta) : std::sin(theta);
        double count = 0.0;
        for (int ip = 0; ip < phi_res; ++ip) {
            const double phi = (ip + 0.5) * dp;
            if (set.contains(theta, phi)) count += 1.0;
        }
        acc += density * count;
    }
    return acc * dt * dp;
}

}  // namespace

double bandwidth_regions(const AngularRegionSet& set, const MediumParams& medium,
                         int theta_res, int phi_res) {
    if (set.empty()) throw ConfigError("bandwidth_regions: empty region set");
    const double omega = medium.kappa * medium.kappa *
                         rasterized_integral(set, theta_res, phi_res, true);
    return std::min(omega, bandwidth_isotropic(medium));
}

double region_solid_angle(const AngularRegionSet& set, int theta_res,
                          int phi_res) {
    if (set.empty()) throw ConfigError("region_solid_angle: empty region set");
    return rasterized_integral(set, theta_res, phi_res, false);
}

double dof_segment(double omega, double L) {
    if (!(omega > 0.0 && L > 0.0))
        throw ConfigError("dof_segment: omega and L must be positive");
    return omega * L / pi;
}

double dof_planar_loss_ratio() {
    const MediumParams m;  // ratio is independent of the medium
    return bandwidth_isotropic(m) / ((2.0 * m.kappa) * (2.0 * m.kappa));
}

double evanescent_power_loss(double d0, const MediumParams& medium) {
    if (d0 < 0.0) throw ConfigError("evanescent_power_loss: negative distance");
    return std::exp(-4.0 * pi * d0 / medium.lambda);
}

double evanescent_power_loss_db(double d0, const MediumParams& medium) {
    if (d0 < 0.0) throw ConfigError("evanescent_power_loss: negative distance");
    return -4.0 * pi * 10.0 * std::log10(std::exp(1.0)) * d0 / medium.lambda;
}

DiskGrid build_disk_grid(const MediumParams& medium, GridMode mode, int n1,
                         int n2, double rim_cut) {
    if (n1 < 4 || n2 < 4)
        throw ConfigError("disk grid: resolution must be at least 4 per axis");
    if (!(rim_cut > 0.0 && rim_cut < medium.kappa / 10.0))
        throw ConfigError("disk grid: rim_cut must be in (0, kappa/10)");

    DiskGrid grid;
    grid.medium = medium;
    grid.mode = mode;
    grid.n1 = n1;
    grid.n2 = n2;
    grid.rim_cut = rim_cut;

    const double kappa = medium.kappa;
    const double r_max = kappa - rim_cut;

    if (mode == GridMode::Polar) {
        // Radial nodes uniform in gamma: r dr = -gamma dgamma, so weights
        // gamma*dgamma*dphi sum exactly to the retained area and 1/gamma
        // integrands become smooth (square-root stretching toward the rim).
        const double g_min = std::sqrt(kappa * kappa - r_max * r_max);
        const double dg = (kappa - g_min) / n1;
        const double dphi = 2.0 * pi / n2;
        grid.nodes.reserve(static_cast<std::size_t>(n1) * n2);
        for (int m = 0; m < n1; ++m) {
            const double g = g_min + (m + 0.5) * dg;
            const double r = std::sqrt(kappa * kappa - g * g);
            for (int j = 0; j < n2; ++j) {
                const double phi = (j + 0.5) * dphi;
                DiskNode node;
                node.kx = r * std::cos(phi);
                node.ky = r * std::sin(phi);
                node.gamma = g;
                node.weight = g * dg * dphi;
                node.neg_index =
                    (n2 % 2 == 0) ? m * n2 + (j + n2 / 2) % n2 : -1;
                grid.nodes.push_back(node);
            }
        }
    } else {
        // Symmetric lattice clipped to the retained disk.
        const double delta = 2.0 * r_max / (n1 - 1);
        std::vector<int> index(static_cast<std::size_t>(n1) * n2, -1);
        for (int i = 0; i < n1; ++i) {
            const double kx = (i - (n1 - 1) / 2.0) * delta;
            for (int j = 0; j < n2; ++j) {
                const double ky = (j - (n2 - 1) / 2.0) * delta;
                if (kx * kx + ky * ky > r_max * r_max) continue;
                index[static_cast<std::size_t>(i) * n2 + j] =
                    static_cast<int>(grid.nodes.size());
                DiskNode node;
                node.kx = kx;
                node.ky = ky;
                node.gamma = std::sqrt(kappa * kappa - kx * kx - ky * ky);
                node.weight = delta * delta;
                grid.nodes.push_back(node);
            }
        }
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j) {
                const int self = index[static_cast<std::size_t>(i) * n2 + j];
                if (self < 0) continue;
                grid.nodes[self].neg_index =
                    index[static_cast<std::size_t>(n1 - 1 - i) * n2 +
                          (n2 - 1 - j)];
            }
        }
    }
    return grid;
}

double disk_inverse_gamma_integral(const DiskGrid& grid) {
    double acc = 0.0;
    for (const auto& n : grid.nodes) acc += n.weight / n.gamma;
    return acc;
}

}  // namespace pw
