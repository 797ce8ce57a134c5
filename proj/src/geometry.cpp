// SPDX-License-Identifier: Apache-2.0

#include "planewave/geometry.hpp"

#include <cmath>

#include "planewave/bessel.hpp"
#include "planewave/errors.hpp"

namespace pw {

MediumParams MediumParams::from_lambda(double lambda, double eta) {
    if (!(lambda > 0.0)) throw ConfigError("medium: lambda must be positive");
    if (!(eta > 0.0)) throw ConfigError("medium: eta must be positive");
    MediumParams m;
    m.lambda = lambda;
    m.kappa = 2.0 * pi / lambda;
    m.eta = eta;
    return m;
}

std::optional<double> gamma_of(double kx, double ky, const MediumParams& medium) {
    const double d = medium.kappa * medium.kappa - kx * kx - ky * ky;
    if (d < 0.0) return std::nullopt;
    return std::sqrt(d);
}

cplx kappa_z(double kx, double ky, const MediumParams& medium) {
    const double d = medium.kappa * medium.kappa - kx * kx - ky * ky;
    if (d >= 0.0) return {std::sqrt(d), 0.0};
    return {0.0, std::sqrt(-d)};
}

cplx kappa_z_sqrt(double kx, double ky, const MediumParams& medium) {
    const double d = medium.kappa * medium.kappa - kx * kx - ky * ky;
    if (d >= 0.0) return {std::sqrt(std::sqrt(d)), 0.0};
    const double root = std::sqrt(std::sqrt(-d));
    const double c = 1.0 / std::sqrt(2.0);
    return {c * root, c * root};
}

WaveVector make_wave(double kx, double ky, const MediumParams& medium) {
    return {kx, ky, kappa_z(kx, ky, medium)};
}

Direction3 spherical_to_cosine(const SphericalAngles& a) {
    return {std::sin(a.theta) * std::cos(a.phi),
            std::sin(a.theta) * std::sin(a.phi), std::cos(a.theta)};
}

SphericalAngles cosine_to_spherical(double kx_hat, double ky_hat) {
    const double r2 = kx_hat * kx_hat + ky_hat * ky_hat;
    if (r2 > 1.0 + 1e-12)
        throw ConfigError("cosine_to_spherical: point outside the unit disk");
    const double r = std::sqrt(std::min(r2, 1.0));
    if (r == 0.0) return {0.0, 0.0};
    double phi = std::atan2(ky_hat, kx_hat);
    if (phi < 0.0) phi += 2.0 * pi;
    return {std::asin(r), phi};
}

double hemisphere_jacobian(double theta) {
    return std::cos(theta) * std::sin(theta);
}

namespace {

cplx phase_exp(const WaveVector& k, const SpatialPoint& p, double sign) {
    // sign = -1 for the source response, +1 for the receive response.
    const double ph = sign * (k.kx * p.x + k.ky * p.y + k.kz.real() * p.z);
    const double mag = -sign * k.kz.imag() * p.z;  // evanescent envelope
    const double a = std::exp(mag);
    return {a * std::cos(ph), a * std::sin(ph)};
}

}  // namespace

cplx plane_wave_source(const WaveVector& k, const SpatialPoint& s) {
    return phase_exp(k, s, -1.0);
}

cplx plane_wave_receive(const WaveVector& k, const SpatialPoint& r) {
    return phase_exp(k, r, +1.0);
}

CheckedWave plane_wave_source_checked(const WaveVector& k, const SpatialPoint& s) {
    return {plane_wave_source(k, s), k.kz.imag() > 0.0 && s.z > 0.0};
}

CheckedWave plane_wave_receive_checked(const WaveVector& k, const SpatialPoint& r) {
    return {plane_wave_receive(k, r), k.kz.imag() > 0.0 && r.z < 0.0};
}

cplx green3(const SpatialPoint& p, const MediumParams& medium) {
    const double R = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (R <= 0.0) throw ConfigError("green3: zero displacement");
    const double ph = medium.kappa * R;
    return cplx{std::cos(ph), std::sin(ph)} / (4.0 * pi * R);
}

cplx green2(double px, double py, const MediumParams& medium) {
    const double R = std::sqrt(px * px + py * py);
    if (R <= 0.0) throw ConfigError("green2: zero displacement");
    const double x = medium.kappa * R;
    return cplx{0.0, 0.25} * cplx{bessel_j0(x), bessel_y0(x)};
}

cplx far_field_green(const SpatialPoint& r_prime, const SpatialPoint& s,
                     const MediumParams& medium) {
    const double R = std::sqrt(r_prime.x * r_prime.x + r_prime.y * r_prime.y +
                               r_prime.z * r_prime.z);
    if (R <= 0.0) throw ConfigError("far_field_green: zero receive distance");
    WaveVector k;
    k.kx = medium.kappa * r_prime.x / R;
    k.ky = medium.kappa * r_prime.y / R;
    k.kz = {medium.kappa * r_prime.z / R, 0.0};
    const double ph = medium.kappa * R;
    return cplx{std::cos(ph), std::sin(ph)} / (4.0 * pi * R) *
           plane_wave_source(k, s);
}

}  // namespace pw
