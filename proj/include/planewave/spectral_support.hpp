// SPDX-License-Identifier: Apache-2.0
//
// Spectral supports and quadrature: the propagating disk, angular region
// unions, bandwidth and degrees-of-freedom constants, evanescent power loss.

#pragma once

#include <vector>

#include "planewave/geometry.hpp"

namespace pw {

struct DiskNode {
    double kx = 0.0, ky = 0.0;
    double gamma = 0.0;   // longitudinal wavenumber at the node, always > 0
    double weight = 0.0;  // quadrature area weight
    int neg_index = -1;   // index of the node at (-kx,-ky), -1 if absent
};

enum class GridMode { Polar, Cartesian };

// Quadrature grid over the disk kx^2+ky^2 <= (kappa - rim_cut)^2. Polar mode
// spaces radial nodes uniformly in gamma, which concentrates nodes near the
// rim and makes 1/gamma integrands smooth.
struct DiskGrid {
    MediumParams medium;
    GridMode mode = GridMode::Polar;
    int n1 = 0, n2 = 0;       // radial x angular, or nx x ny
    double rim_cut = 0.0;     // radial truncation in rad/m
    std::vector<DiskNode> nodes;

    double retained_radius() const { return medium.kappa - rim_cut; }
    double min_gamma() const;
    double weight_sum() const;
};

struct RectRegion {
    double theta_min = 0.0, theta_max = 0.0;  // [0, pi/2]
    double phi_min = 0.0, phi_max = 0.0;      // [0, 2*pi]
};

struct CapRegion {
    Direction3 center;
    double half_angle = 0.0;
};

// Union of hemisphere regions; overlaps are measured once.
struct AngularRegionSet {
    std::vector<RectRegion> rects;
    std::vector<CapRegion> caps;

    bool empty() const { return rects.empty() && caps.empty(); }
    bool contains(double theta, double phi) const;
};

// Area of the full propagating disk, pi*kappa^2.
double bandwidth_isotropic(const MediumParams& medium);

// Disk measure of the region union, kappa^2 * integral of cos(theta)sin(theta)
// over the union; rasterized inclusion-exclusion. Always <= pi*kappa^2.
double bandwidth_regions(const AngularRegionSet& set, const MediumParams& medium,
                         int theta_res = 1024, int phi_res = 2048);

// Solid angle (steradians) of the region union on the hemisphere.
double region_solid_angle(const AngularRegionSet& set, int theta_res = 1024,
                          int phi_res = 2048);

double dof_segment(double omega, double L);

// pi*kappa^2 / (2*kappa)^2, computed not hard-coded.
double dof_planar_loss_ratio();

// exp(-4*pi*d0/lambda) and its dB value (computed analytically so large d0
// does not underflow).
double evanescent_power_loss(double d0, const MediumParams& medium);
double evanescent_power_loss_db(double d0, const MediumParams& medium);

DiskGrid build_disk_grid(const MediumParams& medium, GridMode mode, int n1,
                         int n2, double rim_cut);

// Quadrature of 1/gamma over the retained disk.
double disk_inverse_gamma_integral(const DiskGrid& grid);

}  // namespace pw
