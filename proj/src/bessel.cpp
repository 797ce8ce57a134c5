// SPDX-License-Identifier: Apache-2.0

#include "planewave/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace pw {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;
constexpr double kPi = 3.141592653589793238462643383279502884;

// Hankel asymptotic modulus/phase polynomials in y = (8/x)^2.
double asym_p0(double y) {
    return 1.0 +
           y * (-0.1098628627e-2 +
                y * (0.2734510407e-4 +
                     y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
}

double asym_q0(double y) {
    return -0.1562499995e-1 +
           y * (0.1430488765e-3 +
                y * (-0.6911147651e-5 +
                     y * (0.7621095161e-6 + y * -0.934935152e-7)));
}

}  // namespace

double bessel_j0(double x) {
    const double ax = std::fabs(x);
    if (ax < 8.0) {
        const double q = ax * ax / 4.0;  // (x/2)^2
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 64; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    const double z = 8.0 / ax, y = z * z;
    const double xx = ax - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * ax)) *
           (std::cos(xx) * asym_p0(y) - z * std::sin(xx) * asym_q0(y));
}

double bessel_y0(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_y0: x must be positive");
    if (x < 8.0) {
        const double q = x * x / 4.0;
        double term = 1.0, sum = 0.0, harmonic = 0.0;
        for (int k = 1; k < 64; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            sum += -term * harmonic;  // (-1)^{k+1} H_k q^k/(k!)^2
            if (std::fabs(term) < 1e-18) break;
        }
        return (2.0 / kPi) * ((std::log(x / 2.0) + kEulerGamma) * bessel_j0(x) + sum);
    }
    const double z = 8.0 / x, y = z * z;
    const double xx = x - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) *
           (std::sin(xx) * asym_p0(y) + z * std::cos(xx) * asym_q0(y));
}

}  // namespace pw
