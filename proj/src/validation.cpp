// SPDX-License-Identifier: Apache-2.0

#include "planewave/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "planewave/bessel.hpp"
#include "planewave/errors.hpp"

namespace pw {

namespace {

constexpr double kMatchTol = 1e-9;

bool same_point(const SpatialPoint& a, const SpatialPoint& b) {
    return std::fabs(a.x - b.x) < kMatchTol && std::fabs(a.y - b.y) < kMatchTol &&
           std::fabs(a.z - b.z) < kMatchTol;
}

double mean_power(const std::vector<ChannelRealization>& reals) {
    double p = 0.0;
    std::size_t n = 0;
    for (const auto& r : reals) {
        for (const auto& v : r.h) p += std::norm(v);
        n += r.h.size();
    }
    if (n == 0) throw ConfigError("empirical_acf: no samples");
    return p / static_cast<double>(n);
}

}  // namespace

double clarke_acf(double R, const MediumParams& medium) {
    const double x = 2.0 * R / medium.lambda;
    if (x == 0.0) return 1.0;
    return std::sin(pi * x) / (pi * x);
}

AcfEstimate empirical_acf(const std::vector<ChannelRealization>& reals,
                          const std::vector<SpatialPoint>& lags, Side side) {
    if (reals.empty()) throw ConfigError("empirical_acf: no realizations");
    const auto& ref = reals.front();
    const auto& pts = side == Side::Receive ? ref.receivers : ref.sources;

    // Enumerate ordered point pairs matching each displacement once.
    std::vector<std::vector<std::pair<int, int>>> pairs(lags.size());
    for (std::size_t l = 0; l < lags.size(); ++l) {
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = 0; b < pts.size(); ++b)
                if (same_point(pts[a] - pts[b], lags[l]))
                    pairs[l].push_back({(int)a, (int)b});
        if (pairs[l].empty())
            throw ConfigError("empirical_acf: no point pair matches a lag");
    }

    const double power = mean_power(reals);
    const std::size_t ps = ref.sources.size();
    AcfEstimate est;
    est.lags = lags;
    est.n_realizations = static_cast<int>(reals.size());
    est.values.resize(lags.size());
    est.stderr_.assign(lags.size(),
                       1.0 / std::sqrt(static_cast<double>(reals.size())));
    for (std::size_t l = 0; l < lags.size(); ++l) {
        cplx acc{0.0, 0.0};
        std::size_t count = 0;
        for (const auto& r : reals) {
            for (const auto& [a, b] : pairs[l]) {
                if (side == Side::Receive) {
                    for (std::size_t q = 0; q < ps; ++q)
                        acc += r.h[a * ps + q] * std::conj(r.h[b * ps + q]);
                    count += ps;
                } else {
                    for (std::size_t p = 0; p < r.receivers.size(); ++p)
                        acc += r.h[p * ps + a] * std::conj(r.h[p * ps + b]);
                    count += r.receivers.size();
                }
            }
        }
        est.values[l] = acc / (static_cast<double>(count) * power);
    }
    return est;
}

AcfEstimate empirical_acf_joint(
    const std::vector<ChannelRealization>& reals,
    const std::vector<std::pair<SpatialPoint, SpatialPoint>>& lag_pairs) {
    if (reals.empty()) throw ConfigError("empirical_acf_joint: no realizations");
    const auto& ref = reals.front();
    const std::size_t ps = ref.sources.size();

    struct Quad { int p, p2, q, q2; };
    std::vector<std::vector<Quad>> quads(lag_pairs.size());
    for (std::size_t l = 0; l < lag_pairs.size(); ++l) {
        for (std::size_t p = 0; p < ref.receivers.size(); ++p)
            for (std::size_t p2 = 0; p2 < ref.receivers.size(); ++p2) {
                if (!same_point(ref.receivers[p] - ref.receivers[p2],
                                lag_pairs[l].first))
                    continue;
                for (std::size_t q = 0; q < ps; ++q)
                    for (std::size_t q2 = 0; q2 < ps; ++q2)
                        if (same_point(ref.sources[q] - ref.sources[q2],
                                       lag_pairs[l].second))
                            quads[l].push_back(
                                {(int)p, (int)p2, (int)q, (int)q2});
            }
        if (quads[l].empty())
            throw ConfigError("empirical_acf_joint: no quadruple matches a lag");
    }

    const double power = mean_power(reals);
    AcfEstimate est;
    est.n_realizations = static_cast<int>(reals.size());
    est.values.resize(lag_pairs.size());
    est.stderr_.assign(lag_pairs.size(),
                       1.0 / std::sqrt(static_cast<double>(reals.size())));
    for (const auto& [dr, ds] : lag_pairs) est.lags.push_back(dr + ds);
    for (std::size_t l = 0; l < lag_pairs.size(); ++l) {
        cplx acc{0.0, 0.0};
        for (const auto& r : reals)
            for (const auto& qd : quads[l])
                acc += r.h[qd.p * ps + qd.q] * std::conj(r.h[qd.p2 * ps + qd.q2]);
        est.values[l] =
            acc / (static_cast<double>(reals.size() * quads[l].size()) * power);
    }
    return est;
}

StationarityReport stationarity_test(
    const std::vector<ChannelRealization>& reals,
    const std::vector<std::pair<int, int>>& index_pairs) {
    if (reals.empty()) throw ConfigError("stationarity_test: no realizations");
    const auto& ref = reals.front();
    const std::size_t ps = ref.sources.size();
    const double power = mean_power(reals);
    const double n = static_cast<double>(reals.size());

    StationarityReport rep;
    for (const auto& [a, b] : index_pairs) {
        cplx acc{0.0, 0.0};
        for (const auto& r : reals)
            acc += r.h[a * ps] * std::conj(r.h[b * ps]);
        rep.pair_covariances.push_back(acc / (n * power));
    }

    // Group pairs sharing one displacement and compare their covariances in
    // combined standard errors; each normalized estimate has component
    // standard deviation about 1/sqrt(n).
    std::map<std::array<long long, 3>, std::vector<std::size_t>> groups;
    for (std::size_t l = 0; l < index_pairs.size(); ++l) {
        const SpatialPoint d = ref.receivers[index_pairs[l].first] -
                               ref.receivers[index_pairs[l].second];
        const auto key = std::array<long long, 3>{
            std::llround(d.x / kMatchTol), std::llround(d.y / kMatchTol),
            std::llround(d.z / kMatchTol)};
        groups[key].push_back(l);
    }
    const double sigma = std::sqrt(2.0 / n) * std::sqrt(2.0);
    for (const auto& [key, members] : groups) {
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const double d = std::abs(rep.pair_covariances[members[a]] -
                                          rep.pair_covariances[members[b]]);
                rep.max_discrepancy_sigma =
                    std::max(rep.max_discrepancy_sigma, d / sigma);
            }
    }
    rep.pass = rep.max_discrepancy_sigma < 5.0;
    return rep;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf(xs[i]);
        d = std::max(d, std::fabs(f - i / n));
        d = std::max(d, std::fabs((i + 1) / n - f));
    }
    return d;
}

}  // namespace

GaussianityReport gaussianity_test(const std::vector<cplx>& samples) {
    if (samples.size() < 100)
        throw ConfigError("gaussianity_test: need at least 100 samples");
    double power = 0.0;
    cplx pseudo{0.0, 0.0};
    for (const auto& v : samples) {
        power += std::norm(v);
        pseudo += v * v;
    }
    power /= static_cast<double>(samples.size());
    const double s = std::sqrt(power / 2.0);
    std::vector<double> re, im;
    re.reserve(samples.size());
    im.reserve(samples.size());
    for (const auto& v : samples) {
        re.push_back(v.real() / s);
        im.push_back(v.imag() / s);
    }
    GaussianityReport rep;
    rep.ks_re = ks_statistic(std::move(re));
    rep.ks_im = ks_statistic(std::move(im));
    rep.ks_critical = 1.628 / std::sqrt(static_cast<double>(samples.size()));
    rep.pseudo_ratio =
        std::abs(pseudo) / (power * static_cast<double>(samples.size()));
    rep.pass = rep.ks_re < rep.ks_critical && rep.ks_im < rep.ks_critical &&
               rep.pseudo_ratio <= 0.05;
    return rep;
}

double weyl_check_3d(double x, double y, double z, double trunc_radius, int n,
                     const MediumParams& medium) {
    if (!(z > 0.0)) throw ConfigError("weyl_check_3d: z must be positive");
    if (!(trunc_radius > medium.kappa))
        throw ConfigError("weyl_check_3d: truncation inside the disk");
    const double kappa = medium.kappa;
    const double gmax = std::sqrt(trunc_radius * trunc_radius - kappa * kappa);
    const double dphi = 2.0 * pi / n;
    const double dg_p = kappa / n;
    const double dg_e = gmax / n;
    cplx prop{0.0, 0.0}, evan{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
        // Propagating sheet: radial variable gamma in (0, kappa), the 1/gamma
        // of the measure cancels against r dr = -gamma dgamma.
        const double g = (m + 0.5) * dg_p;
        const double r = std::sqrt(kappa * kappa - g * g);
        // Evanescent tail: decay variable in (0, gmax), same cancellation.
        const double ge = (m + 0.5) * dg_e;
        const double re_ = std::sqrt(kappa * kappa + ge * ge);
        const double decay = std::exp(-ge * z);
        cplx ring_p{0.0, 0.0}, ring_e{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double phi = (j + 0.5) * dphi;
            const double proj = x * std::cos(phi) + y * std::sin(phi);
            const double pp = r * proj;
            ring_p += cplx{std::cos(pp), std::sin(pp)};
            const double pe = re_ * proj;
            ring_e += cplx{std::cos(pe), std::sin(pe)};
        }
        prop += ring_p * cplx{std::cos(g * z), std::sin(g * z)};
        evan += ring_e * decay;
    }
    prop *= dg_p * dphi;
    evan *= dg_e * dphi;
    // The evanescent sheet contributes with kz = i*g, hence the extra 1/i.
    const cplx total = cplx{0.0, 1.0} / (2.0 * pi) *
                       (prop + evan / cplx{0.0, 1.0});
    const double R = std::sqrt(x * x + y * y + z * z);
    const cplx exact = cplx{std::cos(kappa * R), std::sin(kappa * R)} / R;
    return std::abs(total - exact) / std::abs(exact);
}

double weyl_check_2d(double x, double y, double trunc_radius, int n,
                     const MediumParams& medium) {
    if (!(y > 0.0)) throw ConfigError("weyl_check_2d: y must be positive");
    if (!(trunc_radius > medium.kappa))
        throw ConfigError("weyl_check_2d: truncation inside the segment");
    const double kappa = medium.kappa;
    // Propagating part with kx = kappa*sin(u); the 1/ky of the measure
    // cancels against dkx = ky du.
    const double du = pi / n;
    cplx prop{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
        const double u = -pi / 2.0 + (m + 0.5) * du;
        const double ph = kappa * (x * std::sin(u) + y * std::cos(u));
        prop += cplx{std::cos(ph), std::sin(ph)};
    }
    prop *= du;
    // Evanescent tails folded into one cosine, decay variable g with
    // kx = sqrt(kappa^2 + g^2) and 1/ky = 1/(i*g); dkx = g dg / kx.
    const double gmax = std::sqrt(trunc_radius * trunc_radius - kappa * kappa);
    const double dg = gmax / n;
    double evan = 0.0;
    for (int m = 0; m < n; ++m) {
        const double g = (m + 0.5) * dg;
        const double kx = std::sqrt(kappa * kappa + g * g);
        evan += 2.0 * std::cos(kx * x) * std::exp(-g * y) / kx;
    }
    evan *= dg;
    const cplx total = (prop + evan / cplx{0.0, 1.0}) / pi;
    const double rho = std::sqrt(x * x + y * y);
    const cplx exact{bessel_j0(kappa * rho), bessel_y0(kappa * rho)};
    return std::abs(total - exact) / std::abs(exact);
}

std::vector<double> far_field_error_curve(const std::vector<double>& distances,
                                          const SpatialPoint& s,
                                          const MediumParams& medium) {
    std::vector<double> errs;
    errs.reserve(distances.size());
    for (double d : distances) {
        const SpatialPoint r{d, 0.0, 0.0};
        const cplx exact = green3(r - s, medium);
        const cplx approx = far_field_green(r, s, medium);
        errs.push_back(std::abs(approx - exact) / std::abs(exact));
    }
    return errs;
}

}  // namespace pw
