// SPDX-License-Identifier: Apache-2.0
//
// Wavenumber-domain geometry: coordinate maps, the longitudinal wavenumber
// branch rule, plane-wave evaluators and free-space Green functions.

#pragma once

#include <complex>
#include <optional>

namespace pw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Physical constants consumed by every formula: wavelength lambda,
// wavenumber kappa = 2*pi/lambda and normalized intrinsic impedance eta.
struct MediumParams {
    double lambda = 1.0;
    double kappa = 2.0 * pi;
    double eta = 1.0;

    static MediumParams from_lambda(double lambda, double eta = 1.0);
};

// Elevation theta in [0, pi/2], azimuth phi in [0, 2*pi). Upper hemisphere.
struct SphericalAngles {
    double theta = 0.0;
    double phi = 0.0;
};

// Unit direction vector (cosine directions).
struct Direction3 {
    double x = 0.0, y = 0.0, z = 1.0;
};

// Transverse wavenumbers are real; the longitudinal component follows the
// radiating branch rule and is complex off the propagating disk.
struct WaveVector {
    double kx = 0.0, ky = 0.0;
    cplx kz{0.0, 0.0};
};

struct SpatialPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline SpatialPoint operator-(const SpatialPoint& a, const SpatialPoint& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline SpatialPoint operator+(const SpatialPoint& a, const SpatialPoint& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

// Real longitudinal wavenumber sqrt(kappa^2 - kx^2 - ky^2) on the disk
// kx^2 + ky^2 <= kappa^2; absent (evanescent) outside.
std::optional<double> gamma_of(double kx, double ky, const MediumParams& medium);

// Branch rule: gamma on the disk, i*|gamma| outside (Re >= 0 and Im >= 0,
// radiation condition at infinity).
cplx kappa_z(double kx, double ky, const MediumParams& medium);

// Square root of kappa_z on the same branch: gamma^(1/2) on the disk and
// ((1+i)/sqrt(2))*|gamma|^(1/2) outside. Squares back to kappa_z.
cplx kappa_z_sqrt(double kx, double ky, const MediumParams& medium);

// Builds a full wave vector from the transverse pair.
WaveVector make_wave(double kx, double ky, const MediumParams& medium);

Direction3 spherical_to_cosine(const SphericalAngles& a);

// Inverse map. Azimuth by two-argument arctangent; at the zenith the azimuth
// is degenerate and conventionally 0. Outside the unit disk: domain error.
SphericalAngles cosine_to_spherical(double kx_hat, double ky_hat);

// cos(theta)*sin(theta): Jacobian of the hemisphere-to-disk parametrization.
double hemisphere_jacobian(double theta);

// exp(-i k.s). Unit magnitude on the disk; grows as exp(+|gamma|*s_z) on the
// evanescent branch for s_z > 0 (caller's responsibility, see checked variant).
cplx plane_wave_source(const WaveVector& k, const SpatialPoint& s);

// exp(+i k.r). Conjugate-sign analogue; decays on the evanescent branch for
// r_z > 0.
cplx plane_wave_receive(const WaveVector& k, const SpatialPoint& r);

struct CheckedWave {
    cplx value;
    bool growing = false;  // evanescent branch evaluated on its growing side
};
CheckedWave plane_wave_source_checked(const WaveVector& k, const SpatialPoint& s);
CheckedWave plane_wave_receive_checked(const WaveVector& k, const SpatialPoint& r);

// exp(i*kappa*|p|)/(4*pi*|p|). Throws on zero displacement.
cplx green3(const SpatialPoint& p, const MediumParams& medium);

// (i/4)*H0^(1)(kappa*R) for a 2D displacement. Throws on zero displacement.
cplx green2(double px, double py, const MediumParams& medium);

// Far-field approximation: (e^{i*kappa*|r'|}/(4*pi*|r'|)) * exp(-i k.s) with
// k = kappa * unit(r'). Throws on zero r'.
cplx far_field_green(const SpatialPoint& r_prime, const SpatialPoint& s,
                     const MediumParams& medium);

}  // namespace pw
