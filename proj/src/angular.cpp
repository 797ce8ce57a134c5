// SPDX-License-Identifier: Apache-2.0

#include "planewave/angular.hpp"

#include <algorithm>
#include <cmath>

#include "planewave/errors.hpp"

namespace pw {

namespace {

double dot3(const Direction3& a, const Direction3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

bool axis_aligned(const VmfComponent& c) {
    return std::fabs(c.mu.x) < 1e-14 && std::fabs(c.mu.y) < 1e-14;
}

// Hemisphere integral of exp(alpha*(<mu,d> - 1)) by midpoint quadrature.
double hemi_integral(const VmfComponent& c, int theta_res, int phi_res) {
    const double dt = (pi / 2.0) / theta_res;
    const double dp = (2.0 * pi) / phi_res;
    double acc = 0.0;
    for (int it = 0; it < theta_res; ++it) {
        const double theta = (it + 0.5) * dt;
        const double st = std::sin(theta), ct = std::cos(theta);
        double row = 0.0;
        for (int ip = 0; ip < phi_res; ++ip) {
            const double phi = (ip + 0.5) * dp;
            const double t =
                c.mu.x * st * std::cos(phi) + c.mu.y * st * std::sin(phi) +
                c.mu.z * ct;
            row += std::exp(c.alpha * (t - 1.0));
        }
        acc += row * st;
    }
    return acc * dt * dp;
}

// Exact when the modal direction is the zenith; Richardson-extrapolated
// quadrature otherwise.
double hemisphere_normalizer(const VmfComponent& c) {
    if (c.alpha < 1e-6) return 2.0 * pi;
    if (axis_aligned(c))
        return 2.0 * pi * (1.0 - std::exp(-c.alpha)) / c.alpha;
    const double coarse = hemi_integral(c, 512, 1024);
    const double fine = hemi_integral(c, 1024, 2048);
    return fine + (fine - coarse) / 3.0;
}

void validate_mixture(const VmfMixture& mix) {
    if (mix.components.empty() ||
        mix.components.size() != mix.weights.size())
        throw ConfigError("vmf mixture: components and weights must be "
                          "nonempty lists of equal length");
    double sum = 0.0;
    for (double w : mix.weights) {
        if (w < 0.0) throw ConfigError("vmf mixture: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw ConfigError("vmf mixture: weights must sum to 1");
    for (const auto& c : mix.components) {
        const double n2 = dot3(c.mu, c.mu);
        if (std::fabs(n2 - 1.0) > 1e-9 || c.mu.z < -1e-12)
            throw ConfigError("vmf mixture: modal direction must be a unit "
                              "vector on the upper hemisphere");
        if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha))
            throw ConfigError("vmf mixture: concentration must be finite "
                              "and nonnegative");
    }
}

}  // namespace

AngularDistribution AngularDistribution::isotropic(bool halved_sphere_norm) {
    AngularDistribution d;
    d.kind = Kind::Isotropic;
    d.halved_sphere_norm = halved_sphere_norm;
    return d;
}

AngularDistribution AngularDistribution::from_mixture(VmfMixture mix,
                                                      bool halved_sphere_norm) {
    validate_mixture(mix);
    AngularDistribution d;
    d.kind = Kind::Mixture;
    d.mixture = std::move(mix);
    d.halved_sphere_norm = halved_sphere_norm;
    d.hemi_norm.reserve(d.mixture.components.size());
    for (const auto& c : d.mixture.components)
        d.hemi_norm.push_back(hemisphere_normalizer(c));
    return d;
}

AngularDistribution AngularDistribution::from_regions(AngularRegionSet set) {
    if (set.empty()) throw ConfigError("piecewise distribution: empty set");
    AngularDistribution d;
    d.kind = Kind::Piecewise;
    d.regions = std::move(set);
    d.union_solid_angle = region_solid_angle(d.regions);
    return d;
}

AngularDistribution AngularDistribution::from_rays(std::vector<Ray> rays) {
    if (rays.empty()) throw ConfigError("discrete distribution: empty ray list");
    double sum = 0.0;
    for (const auto& r : rays) {
        if (r.gain < 0.0) throw ConfigError("discrete distribution: negative gain");
        sum += r.gain;
    }
    if (!(sum > 0.0)) throw ConfigError("discrete distribution: zero total gain");
    for (auto& r : rays) r.gain /= sum;
    AngularDistribution d;
    d.kind = Kind::Discrete;
    d.rays = std::move(rays);
    return d;
}

double vmf_norm_const(double alpha) {
    if (alpha < 1e-6) return 1.0 / (4.0 * pi);
    return alpha * std::exp(-alpha) /
           (2.0 * pi * (1.0 - std::exp(-2.0 * alpha)));
}

double vmf_pdf(const Direction3& dir, const VmfComponent& comp) {
    if (comp.alpha < 1e-6) return 1.0 / (4.0 * pi);
    const double t = dot3(dir, comp.mu);
    return comp.alpha * std::exp(comp.alpha * (t - 1.0)) /
           (2.0 * pi * (1.0 - std::exp(-2.0 * comp.alpha)));
}

double mixture_pdf(const Direction3& dir, const VmfMixture& mix) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mix.components.size(); ++i)
        acc += mix.weights[i] * vmf_pdf(dir, mix.components[i]);
    return acc;
}

double angular_density(const AngularDistribution& dist, const Direction3& dir) {
    switch (dist.kind) {
        case AngularDistribution::Kind::Isotropic:
            return dist.halved_sphere_norm ? 1.0 / (4.0 * pi) : 1.0 / (2.0 * pi);
        case AngularDistribution::Kind::Mixture: {
            double acc = 0.0;
            for (std::size_t i = 0; i < dist.mixture.components.size(); ++i) {
                const auto& c = dist.mixture.components[i];
                const double w = dist.mixture.weights[i];
                if (dist.halved_sphere_norm) {
                    acc += w * 2.0 * vmf_pdf(dir, c);
                } else if (c.alpha < 1e-6) {
                    acc += w / (2.0 * pi);
                } else {
                    const double t = dot3(dir, c.mu);
                    acc += w * std::exp(c.alpha * (t - 1.0)) / dist.hemi_norm[i];
                }
            }
            return acc;
        }
        case AngularDistribution::Kind::Piecewise: {
            const auto a = cosine_to_spherical(dir.x, dir.y);
            return dist.regions.contains(a.theta, a.phi)
                       ? 1.0 / dist.union_solid_angle
                       : 0.0;
        }
        case AngularDistribution::Kind::Discrete:
            throw ConfigError(
                "angular_density: discrete distributions are impulsive");
    }
    return 0.0;
}

double mean_resultant(double alpha) {
    if (alpha < 0.0) throw ConfigError("mean_resultant: negative alpha");
    if (alpha < 1e-3) return alpha / 3.0 - alpha * alpha * alpha / 45.0;
    return 1.0 / std::tanh(alpha) - 1.0 / alpha;
}

double circular_variance(double alpha) {
    const double t = mean_resultant(alpha);
    return 1.0 - t * t;
}

double alpha_from_variance(double nu2) {
    if (!(nu2 > 0.0 && nu2 <= 1.0))
        throw ConfigError("alpha_from_variance: variance must be in (0, 1]");
    if (nu2 == 1.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (circular_variance(hi) > nu2) {
        hi *= 2.0;
        if (hi > 1e12)
            throw ConfigError("alpha_from_variance: variance too small");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (circular_variance(mid) > nu2)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Gauss-Legendre nodes by Newton iteration on Legendre polynomials.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

VmfMoments vmf_moments(const VmfComponent& comp, bool hemisphere) {
    VmfMoments m;
    const auto& mu = comp.mu;
    if (!hemisphere) {
        m.e_t = mean_resultant(comp.alpha);
        // E{t^2} by quadrature of t^2 e^{alpha (t-1)} over the full sphere.
        std::vector<double> x, w;
        gauss_legendre(200, x, w);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double f = std::exp(comp.alpha * (x[i] - 1.0));
            num += w[i] * x[i] * x[i] * f;
            den += w[i] * f;
        }
        m.e_t2 = num / den;
        const double var_t = m.e_t2 - m.e_t * m.e_t;
        const double tang = (1.0 - m.e_t2) / 2.0;
        const double mv[3] = {mu.x, mu.y, mu.z};
        for (int a = 0; a < 3; ++a) {
            m.mean[a] = m.e_t * mv[a];
            for (int b = 0; b < 3; ++b) {
                const double outer = mv[a] * mv[b];
                m.cov[a][b] = var_t * outer + tang * ((a == b) - outer);
            }
        }
        return m;
    }
    // Hemisphere-truncated moments of the exactly-normalized density.
    const int tr = 512, pr = 1024;
    const double dt = (pi / 2.0) / tr, dp = (2.0 * pi) / pr;
    double z = 0.0, mean[3] = {0, 0, 0}, sec[3][3] = {{0}};
    for (int it = 0; it < tr; ++it) {
        const double theta = (it + 0.5) * dt;
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int ip = 0; ip < pr; ++ip) {
            const double phi = (ip + 0.5) * dp;
            const double d[3] = {st * std::cos(phi), st * std::sin(phi), ct};
            const double t = d[0] * mu.x + d[1] * mu.y + d[2] * mu.z;
            const double f = std::exp(comp.alpha * (t - 1.0)) * st;
            z += f;
            for (int a = 0; a < 3; ++a) {
                mean[a] += f * d[a];
                for (int b = 0; b < 3; ++b) sec[a][b] += f * d[a] * d[b];
            }
        }
    }
    const double mv[3] = {mu.x, mu.y, mu.z};
    for (int a = 0; a < 3; ++a) m.mean[a] = mean[a] / z;
    m.e_t = m.mean[0] * mv[0] + m.mean[1] * mv[1] + m.mean[2] * mv[2];
    m.e_t2 = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            m.cov[a][b] = sec[a][b] / z - m.mean[a] * m.mean[b];
            m.e_t2 += mv[a] * (sec[a][b] / z) * mv[b];
        }
    return m;
}

double lower_hemisphere_mass(const VmfComponent& comp) {
    const int tr = 256, pr = 512;
    const double dt = (pi / 2.0) / tr, dp = (2.0 * pi) / pr;
    double acc = 0.0;
    for (int it = 0; it < tr; ++it) {
        const double theta = pi / 2.0 + (it + 0.5) * dt;
        const double st = std::sin(theta), ct = std::cos(theta);
        for (int ip = 0; ip < pr; ++ip) {
            const double phi = (ip + 0.5) * dp;
            const Direction3 d{st * std::cos(phi), st * std::sin(phi), ct};
            acc += vmf_pdf(d, comp) * st;
        }
    }
    return acc * dt * dp;
}

namespace {

Direction3 sample_vmf(const VmfComponent& c, Rng& rng) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double u = rng.u01();
        double t;
        if (c.alpha < 1e-9) {
            t = 2.0 * u - 1.0;
        } else {
            // Inverse CDF of the full-sphere marginal of t = <mu, d>.
            t = 1.0 +
                std::log(u + (1.0 - u) * std::exp(-2.0 * c.alpha)) / c.alpha;
        }
        t = std::clamp(t, -1.0, 1.0);
        const double psi = 2.0 * pi * rng.u01();
        // Tangent frame about the modal direction.
        Direction3 e1;
        if (std::fabs(c.mu.z) < 0.999) {
            const double n = std::hypot(c.mu.y, c.mu.x);
            e1 = {-c.mu.y / n, c.mu.x / n, 0.0};
        } else {
            e1 = {1.0, 0.0, 0.0};
        }
        const Direction3 e2{c.mu.y * e1.z - c.mu.z * e1.y,
                            c.mu.z * e1.x - c.mu.x * e1.z,
                            c.mu.x * e1.y - c.mu.y * e1.x};
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        Direction3 d{t * c.mu.x + s * (std::cos(psi) * e1.x + std::sin(psi) * e2.x),
                     t * c.mu.y + s * (std::cos(psi) * e1.y + std::sin(psi) * e2.y),
                     t * c.mu.z + s * (std::cos(psi) * e1.z + std::sin(psi) * e2.z)};
        if (d.z >= 0.0) return d;  // hemisphere constraint by rejection
    }
    throw ConfigError("sample_direction: hemisphere rejection failed to accept");
}

int region_multiplicity(const AngularRegionSet& set, double theta, double phi) {
    int count = 0;
    const Direction3 d = spherical_to_cosine({theta, phi});
    for (const auto& r : set.rects)
        if (theta >= r.theta_min && theta <= r.theta_max && phi >= r.phi_min &&
            phi <= r.phi_max)
            ++count;
    for (const auto& c : set.caps)
        if (dot3(d, c.center) >= std::cos(c.half_angle)) ++count;
    return count;
}

Direction3 sample_piecewise(const AngularRegionSet& set, Rng& rng) {
    // Proposal: region chosen proportional to its own measure; acceptance
    // 1/multiplicity yields the uniform density on the union.
    std::vector<double> measure;
    for (const auto& r : set.rects)
        measure.push_back((std::cos(r.theta_min) - std::cos(r.theta_max)) *
                          (r.phi_max - r.phi_min));
    for (const auto& c : set.caps)
        measure.push_back(2.0 * pi * (1.0 - std::cos(c.half_angle)));
    double total = 0.0;
    for (double m : measure) total += m;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double pick = rng.u01() * total;
        std::size_t idx = 0;
        while (idx + 1 < measure.size() && pick > measure[idx]) {
            pick -= measure[idx];
            ++idx;
        }
        double theta, phi;
        Direction3 d;
        if (idx < set.rects.size()) {
            const auto& r = set.rects[idx];
            const double ct = std::cos(r.theta_min) -
                              rng.u01() * (std::cos(r.theta_min) -
                                           std::cos(r.theta_max));
            theta = std::acos(std::clamp(ct, -1.0, 1.0));
            phi = r.phi_min + rng.u01() * (r.phi_max - r.phi_min);
            d = spherical_to_cosine({theta, phi});
        } else {
            const auto& c = set.caps[idx - set.rects.size()];
            const double t = 1.0 - rng.u01() * (1.0 - std::cos(c.half_angle));
            const double psi = 2.0 * pi * rng.u01();
            Direction3 e1;
            if (std::fabs(c.center.z) < 0.999) {
                const double n = std::hypot(c.center.y, c.center.x);
                e1 = {-c.center.y / n, c.center.x / n, 0.0};
            } else {
                e1 = {1.0, 0.0, 0.0};
            }
            const Direction3 e2{c.center.y * e1.z - c.center.z * e1.y,
                                c.center.z * e1.x - c.center.x * e1.z,
                                c.center.x * e1.y - c.center.y * e1.x};
            const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
            d = {t * c.center.x + s * (std::cos(psi) * e1.x + std::sin(psi) * e2.x),
                 t * c.center.y + s * (std::cos(psi) * e1.y + std::sin(psi) * e2.y),
                 t * c.center.z + s * (std::cos(psi) * e1.z + std::sin(psi) * e2.z)};
            if (d.z < 0.0) continue;
            const auto a = cosine_to_spherical(d.x, d.y);
            theta = a.theta;
            phi = a.phi;
        }
        const int mult = region_multiplicity(set, theta, phi);
        if (mult <= 1 || rng.u01() * mult < 1.0) return d;
    }
    throw ConfigError("sample_direction: region rejection failed to accept");
}

}  // namespace

Direction3 sample_direction(const AngularDistribution& dist, Rng& rng) {
    switch (dist.kind) {
        case AngularDistribution::Kind::Isotropic: {
            const double z = rng.u01();
            const double phi = 2.0 * pi * rng.u01();
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            return {s * std::cos(phi), s * std::sin(phi), z};
        }
        case AngularDistribution::Kind::Mixture: {
            double pick = rng.u01();
            std::size_t idx = 0;
            while (idx + 1 < dist.mixture.weights.size() &&
                   pick > dist.mixture.weights[idx]) {
                pick -= dist.mixture.weights[idx];
                ++idx;
            }
            return sample_vmf(dist.mixture.components[idx], rng);
        }
        case AngularDistribution::Kind::Piecewise:
            return sample_piecewise(dist.regions, rng);
        case AngularDistribution::Kind::Discrete: {
            double pick = rng.u01();
            std::size_t idx = 0;
            while (idx + 1 < dist.rays.size() && pick > dist.rays[idx].gain) {
                pick -= dist.rays[idx].gain;
                ++idx;
            }
            return dist.rays[idx].source_dir;
        }
    }
    return {0.0, 0.0, 1.0};
}

double check_normalization(const AngularDistribution& dist, int theta_res,
                           int phi_res) {
    if (dist.kind == AngularDistribution::Kind::Discrete) {
        double sum = 0.0;
        for (const auto& r : dist.rays) sum += r.gain;
        return std::fabs(sum - 1.0);
    }
    if (dist.kind == AngularDistribution::Kind::Isotropic) {
        const double c = dist.halved_sphere_norm ? 0.5 : 1.0;
        return std::fabs(c - 1.0);  // analytic hemisphere integral
    }
    if (dist.kind == AngularDistribution::Kind::Piecewise) {
        // The density is the indicator over the measure rasterized on the
        // same grid, so the quadrature cancels exactly.
        const double norm = region_solid_angle(dist.regions, theta_res, phi_res);
        const double dt = (pi / 2.0) / theta_res, dp = (2.0 * pi) / phi_res;
        double acc = 0.0;
        for (int it = 0; it < theta_res; ++it) {
            const double theta = (it + 0.5) * dt;
            const double st = std::sin(theta);
            for (int ip = 0; ip < phi_res; ++ip) {
                const double phi = (ip + 0.5) * dp;
                if (dist.regions.contains(theta, phi)) acc += st / norm;
            }
        }
        return std::fabs(acc * dt * dp - 1.0);
    }
    auto midpoint = [&](int tr, int pr) {
        const double dt = (pi / 2.0) / tr, dp = (2.0 * pi) / pr;
        double acc = 0.0;
        for (int it = 0; it < tr; ++it) {
            const double theta = (it + 0.5) * dt;
            const double st = std::sin(theta), ct = std::cos(theta);
            for (int ip = 0; ip < pr; ++ip) {
                const double phi = (ip + 0.5) * dp;
                const Direction3 d{st * std::cos(phi), st * std::sin(phi), ct};
                acc += angular_density(dist, d) * st;
            }
        }
        return acc * dt * dp;
    };
    // second-order midpoint rule; one halving step extrapolates to O(h^4)
    const double coarse = midpoint(theta_res, phi_res);
    const double fine = midpoint(2 * theta_res, 2 * phi_res);
    return std::fabs(fine + (fine - coarse) / 3.0 - 1.0);
}

}  // namespace pw
