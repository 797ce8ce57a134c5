// SPDX-License-Identifier: Apache-2.0
//
// Bessel functions of order zero. Ascending series below |x| = 8, Hankel
// asymptotic expansion beyond; no external special-function dependency.

#pragma once

namespace pw {

double bessel_j0(double x);

// Second kind, x > 0.
double bessel_y0(double x);

}  // namespace pw
