// SPDX-License-Identifier: Apache-2.0
//
// Spectral factors and power spectral densities on the double disk: factor
// construction from angular distributions, the 4D density, average power,
// normalization and the Mercer-type power bound.

#pragma once

#include <functional>
#include <memory>

#include "planewave/angular.hpp"
#include "planewave/spectral_support.hpp"

namespace pw {

// Largest admissible coupled grid (node pairs).
inline constexpr std::size_t kCoupledGuard = std::size_t(1) << 28;

// Nonnegative factor A(kx,ky,qx,qy) on disk x disk. Separable factors combine
// hemisphere densities at source and receive; Coupled stores a dense grid;
// IsotropicUnitPower is the constant pinned so the continuum power is 1.
struct SpectralFactor {
    enum class Form { IsotropicUnitPower, Separable, Coupled };

    Form form = Form::IsotropicUnitPower;
    AngularDistribution source;   // Separable
    AngularDistribution receive;  // Separable
    std::shared_ptr<const DiskGrid> grid_r, grid_s;  // Coupled
    std::vector<double> values;   // Coupled, receive-major [i*Ms + j]
    double scale = 1.0;

    static SpectralFactor isotropic();
    static SpectralFactor separable(AngularDistribution receive,
                                    AngularDistribution source);
    static SpectralFactor coupled(std::shared_ptr<const DiskGrid> grid_r,
                                  std::shared_ptr<const DiskGrid> grid_s,
                                  std::vector<double> values);
};

// The closed-form isotropic 6D factor squared, 2*pi^2/kappa. Note: plugging
// this constant into the 4D power integral does not give unit power for a
// general medium; unit-power scenarios use normalize_factor instead.
double isotropic_spectral_factor_sq(const MediumParams& medium);

// Factor value at arbitrary transverse wavenumbers (analytic forms only;
// Coupled factors are evaluated at grid nodes via factor_value_at).
double factor_value(const SpectralFactor& f, double kx, double ky, double qx,
                    double qy, const MediumParams& medium);

double factor_value_at(const SpectralFactor& f, const DiskGrid& grid_r, int i,
                       const DiskGrid& grid_s, int j,
                       const MediumParams& medium);

// (kappa*eta/2)^2 * A^2 / (gamma(k) * gamma(q)). Domain error on or outside
// the rim.
double psd4(const SpectralFactor& f, double kx, double ky, double qx, double qy,
            const MediumParams& medium);

// (1/(2*pi)^4) * quadrature of the 4D density over disk x disk.
double average_power(const SpectralFactor& f, const DiskGrid& grid_r,
                     const DiskGrid& grid_s, const MediumParams& medium);

// Same power through hemisphere quadratures in spherical coordinates
// (separable and isotropic forms only).
double average_power_spherical(const SpectralFactor& f,
                               const MediumParams& medium, int theta_res = 256,
                               int phi_res = 512);

// Rescales so the grid-quadrature power equals target.
SpectralFactor normalize_factor(SpectralFactor f, const DiskGrid& grid_r,
                                const DiskGrid& grid_s,
                                const MediumParams& medium,
                                double target = 1.0);

// Samples a 6D factor given on the hemisphere pair at the disk nodes and
// rescales by 1/(2*pi*kappa*eta).
SpectralFactor factor_from_6d(
    const std::function<double(const Direction3&, const Direction3&)>& a6,
    std::shared_ptr<const DiskGrid> grid_r,
    std::shared_ptr<const DiskGrid> grid_s, const MediumParams& medium);

// (kappa^2 * eta * sup A / 8)^2 with the supremum taken over the grid nodes.
double mercer_power_bound(const SpectralFactor& f, const DiskGrid& grid_r,
                          const DiskGrid& grid_s, const MediumParams& medium);

// Normalized discrete distribution treating the gains as power weights.
AngularDistribution discrete_factor_from_rays(std::vector<Ray> rays);

}  // namespace pw
