// SPDX-License-Identifier: Apache-2.0
//
// Generative core: stationary angular response draws on the double disk,
// channel synthesis on point sets, migration/system functions, the 2x2
// upgoing/downgoing block model, the 2D variant and free-space references.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "planewave/psd.hpp"

namespace pw {

enum class Model { Scalar3D, Complete3D, Scalar2D };

struct SynthesisConfig {
    MediumParams medium;
    std::shared_ptr<const DiskGrid> grid_r, grid_s;
    SpectralFactor factor;
    std::uint64_t seed = 0;
    bool enforce_reciprocity = false;
    Model model = Model::Scalar3D;
    // Relative amplitude gains of the four up/down blocks, row = receive side.
    // The scalar model corresponds to gains {{1,0},{0,0}}.
    double block_gain[2][2] = {{1.0, 0.0}, {0.0, 0.0}};
};

// One Monte-Carlo draw of the angular response on the node-pair grid.
// Stored values carry the Gaussian scaled by 1/sqrt(weight_i*weight_j), so
// that the weighted synthesis sum has per-cell variance
// S * weight_i * weight_j / (2*pi)^4 and converges to the continuum
// autocorrelation.
struct AngularResponseGrid {
    std::shared_ptr<const DiskGrid> grid_r, grid_s;
    std::vector<cplx> values;  // receive-major [i*Ms + j]
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
};

struct ChannelRealization {
    std::vector<cplx> h;  // receive-major [p*Ps + q]
    std::vector<SpatialPoint> receivers, sources;
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
};

AngularResponseGrid draw_angular_response(const SynthesisConfig& config,
                                          std::uint64_t realization = 0);

// Reference quadrature sum: h(r,s) = (1/(2*pi)^2) * sum over node pairs of
// a_r * H * a_s * weight_i * weight_j. Complexity O(Pr*Ps*Mr*Ms).
ChannelRealization synthesize(const AngularResponseGrid& resp,
                              const std::vector<SpatialPoint>& sources,
                              const std::vector<SpatialPoint>& receivers);

// Stored response at node pair (i,j) times the migration phases
// exp(i*(gamma_i*r_z - gamma_j*s_z)). Magnitude independent of the offsets.
cplx spectral_response(const AngularResponseGrid& resp, int i, int j,
                       double r_z, double s_z);

// Index remapping (k,q) -> (k-q, -q) with plane offsets (r_z, r_z-s_z).
// Throws if the shifted arguments are off the grid.
cplx system_function_shift(const AngularResponseGrid& resp, int i, int j,
                           double r_z, double s_z);

// Receive-side partial sum: response at spatial point r to the single
// incident plane-wave node j with source plane offset s_z.
cplx mixed_receive_response(const AngularResponseGrid& resp,
                            const SpatialPoint& r, int j, double s_z);

// Exact node lookup by coordinates; -1 if absent.
int find_node(const DiskGrid& grid, double kx, double ky, double tol = 1e-9);

// h(r, r - p) looked up in the realization's point sets.
cplx lsv_impulse_response(const ChannelRealization& real, const SpatialPoint& r,
                          const SpatialPoint& p);

// Fused draw + projection. Bit-identical for a fixed (seed, realization)
// regardless of thread count; Complete3D accumulates the nonzero blocks on
// separate streams, so a ++-only configuration reproduces the scalar model
// bitwise. With a single source point (scalar model, no reciprocity) the
// source-node sum of independent Gaussians is collapsed to its exact
// distributional equivalent, one Gaussian per receive node.
ChannelRealization simulate_one(const SynthesisConfig& config,
                                std::uint64_t realization,
                                const std::vector<SpatialPoint>& sources,
                                const std::vector<SpatialPoint>& receivers);

// Runs realizations [0, n) and delivers them in index order.
void simulate_realizations(
    const SynthesisConfig& config, int n_realizations,
    const std::vector<SpatialPoint>& sources,
    const std::vector<SpatialPoint>& receivers,
    const std::function<void(const ChannelRealization&)>& sink,
    int threads = 1);

ChannelRealization synthesize_complete(const SynthesisConfig& config,
                                       std::uint64_t realization,
                                       const std::vector<SpatialPoint>& sources,
                                       const std::vector<SpatialPoint>& receivers);

// 2D variant on the wavenumber segment |kx| <= kappa, points in the (x,y)
// plane. The density p(theta_r, theta_s) integrates to 1 over the angular
// box. polar_path selects the angular parametrization; the cosine-direction
// path uses the e^{+i kappa.s} source sign of the 2D representation.
struct Synthesis2DConfig {
    MediumParams medium;
    int n_nodes = 128;
    double theta_min = 0.0, theta_max = pi / 2.0;
    std::function<double(double, double)> density;
    std::uint64_t seed = 0;
};

ChannelRealization synthesize_2d(const Synthesis2DConfig& config,
                                 std::uint64_t realization,
                                 const std::vector<SpatialPoint>& sources,
                                 const std::vector<SpatialPoint>& receivers,
                                 bool polar_path);

// Deterministic free-space matrix -i*kappa*eta*g(r - s).
ChannelRealization freespace_reference(const std::vector<SpatialPoint>& sources,
                                       const std::vector<SpatialPoint>& receivers,
                                       const MediumParams& medium);

// Finite plane-wave sum for a discrete ray set: h(r,s) =
// sum_j sqrt(gain_j) * e^{i kappa rhat_j . r} * e^{-i kappa shat_j . s} * w_j.
ChannelRealization synthesize_rays(const std::vector<Ray>& rays,
                                   const MediumParams& medium,
                                   std::uint64_t seed, std::uint64_t realization,
                                   const std::vector<SpatialPoint>& sources,
                                   const std::vector<SpatialPoint>& receivers,
                                   bool random_phases = true);

}  // namespace pw
