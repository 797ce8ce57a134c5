// SPDX-License-Identifier: Apache-2.0
//
// Estimators and oracles: empirical autocorrelation, the isotropic sinc
// closed form, stationarity and Gaussianity tests, Weyl-identity quadrature
// checks and far-field error curves.

#pragma once

#include <utility>
#include <vector>

#include "planewave/synthesis.hpp"

namespace pw {

// sinc(2R/lambda) with sinc(x) = sin(pi x)/(pi x).
double clarke_acf(double R, const MediumParams& medium);

enum class Side { Receive, Source };

struct AcfEstimate {
    std::vector<SpatialPoint> lags;
    std::vector<cplx> values;        // normalized by zero-lag power
    std::vector<double> stderr_;     // 1/sqrt(n_realizations) per lag
    int n_realizations = 0;
};

// Sample covariance at the given displacements, averaged over realizations
// and over all point pairs matching each displacement, normalized by the
// zero-lag power.
AcfEstimate empirical_acf(const std::vector<ChannelRealization>& reals,
                          const std::vector<SpatialPoint>& lags, Side side);

// Two-sided ACF at (receive lag, source lag) pairs.
AcfEstimate empirical_acf_joint(
    const std::vector<ChannelRealization>& reals,
    const std::vector<std::pair<SpatialPoint, SpatialPoint>>& lag_pairs);

struct StationarityReport {
    std::vector<cplx> pair_covariances;
    double max_discrepancy_sigma = 0.0;  // in combined standard errors
    bool pass = false;
};

// Compares covariance estimates across point pairs sharing one displacement.
// Pairs are given as index pairs into the realizations' receive points; the
// source index is fixed to 0.
StationarityReport stationarity_test(
    const std::vector<ChannelRealization>& reals,
    const std::vector<std::pair<int, int>>& index_pairs);

struct GaussianityReport {
    double ks_re = 0.0, ks_im = 0.0;
    double ks_critical = 0.0;  // 1% asymptotic level
    double pseudo_ratio = 0.0; // |E{h^2}| / E{|h|^2}
    bool pass = false;
};

GaussianityReport gaussianity_test(const std::vector<cplx>& samples);

// Relative error of the truncated plane-wave decomposition of the spherical
// wave against exp(i*kappa*R)/R at (x,y,z), z > 0. The integral is split
// into the propagating part (radial nodes uniform in gamma) and the
// evanescent tail up to the truncation radius.
double weyl_check_3d(double x, double y, double z, double trunc_radius, int n,
                     const MediumParams& medium);

// 2D counterpart against the order-zero Hankel function at (x,y), y > 0.
double weyl_check_2d(double x, double y, double trunc_radius, int n,
                     const MediumParams& medium);

// |far_field_green - green3| / |green3| for receivers at the given distances
// along x from a source offset s.
std::vector<double> far_field_error_curve(const std::vector<double>& distances,
                                          const SpatialPoint& s,
                                          const MediumParams& medium);

}  // namespace pw
