// SPDX-License-Identifier: Apache-2.0
//
// Directional statistics on the upper hemisphere: von Mises-Fisher components
// and mixtures, moments, circular-variance inversion, piecewise-constant and
// discrete ray distributions, normalization checks and direction sampling.

#pragma once

#include <array>
#include <vector>

#include "planewave/geometry.hpp"
#include "planewave/rng.hpp"
#include "planewave/spectral_support.hpp"

namespace pw {

struct VmfComponent {
    Direction3 mu;        // modal direction, z >= 0
    double alpha = 0.0;   // concentration >= 0
};

struct VmfMixture {
    std::vector<VmfComponent> components;
    std::vector<double> weights;  // nonnegative, sum to 1
};

// One propagation path: a source/receive direction pair with a power weight.
struct Ray {
    Direction3 source_dir;
    Direction3 receive_dir;
    double gain = 1.0;
};

// Tagged union of the supported hemisphere densities. Densities are
// normalized on the hemisphere; halved_sphere_norm switches the isotropic constant
// from 1/(2*pi) to 1/(4*pi) and vMF components to the doubled full-sphere
// constant alpha/(2*pi*sinh(alpha)) instead of the exact hemisphere
// normalizer.
struct AngularDistribution {
    enum class Kind { Isotropic, Mixture, Piecewise, Discrete };

    Kind kind = Kind::Isotropic;
    VmfMixture mixture;
    AngularRegionSet regions;
    std::vector<Ray> rays;
    bool halved_sphere_norm = false;

    // Cached hemisphere normalizers of exp(alpha*(<mu,d> - 1)) per component,
    // and the solid angle of the piecewise union. Filled by the factories.
    std::vector<double> hemi_norm;
    double union_solid_angle = 0.0;

    static AngularDistribution isotropic(bool halved_sphere_norm = false);
    static AngularDistribution from_mixture(VmfMixture mix,
                                            bool halved_sphere_norm = false);
    static AngularDistribution from_regions(AngularRegionSet set);
    static AngularDistribution from_rays(std::vector<Ray> rays);
};

// Full-sphere normalization constant alpha/(4*pi*sinh(alpha)), with the
// analytic small-alpha limit 1/(4*pi).
double vmf_norm_const(double alpha);

// c(alpha)*exp(alpha*<mu,dir>) with the full-sphere constant.
double vmf_pdf(const Direction3& dir, const VmfComponent& comp);

// Convex combination of component pdfs (full-sphere constants).
double mixture_pdf(const Direction3& dir, const VmfMixture& mix);

// Hemisphere-normalized density used by spectral factors and normalization
// checks. Throws for Discrete (impulsive) distributions.
double angular_density(const AngularDistribution& dist, const Direction3& dir);

// coth(alpha) - 1/alpha with a series fallback for small alpha.
double mean_resultant(double alpha);

// 1 - mean_resultant(alpha)^2.
double circular_variance(double alpha);

// Unique alpha >= 0 with circular_variance(alpha) = nu2, by bisection.
double alpha_from_variance(double nu2);

struct VmfMoments {
    std::array<double, 3> mean{};
    std::array<std::array<double, 3>, 3> cov{};
    double e_t = 0.0;   // E{<mu,d>}
    double e_t2 = 0.0;  // E{<mu,d>^2}
};

// Mean vector and covariance. Full-sphere moments use the closed-form mean
// and 1D quadrature for E{t^2}; hemisphere moments integrate the truncated
// density over the hemisphere.
VmfMoments vmf_moments(const VmfComponent& comp, bool hemisphere = false);

// Full-sphere vMF mass below the horizon; quantifies the hemisphere
// truncation error of the halved_sphere_norm constants.
double lower_hemisphere_mass(const VmfComponent& comp);

Direction3 sample_direction(const AngularDistribution& dist, Rng& rng);

// |quadrature(p * sin(theta)) - 1| at the given midpoint resolution.
// Discrete distributions are checked by gain summation instead.
double check_normalization(const AngularDistribution& dist, int theta_res = 512,
                           int phi_res = 1024);

}  // namespace pw
