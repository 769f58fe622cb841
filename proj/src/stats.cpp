#include "cle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cle/rng.hpp"

namespace cle {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::pair<double, double> mean_var(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= v.size() > 1 ? static_cast<double>(v.size() - 1) : 1.0;
    return {m, s2};
}

std::pair<double, double> ci95_of(std::span<const double> v, double mean, double var,
                                  std::uint64_t ci_seed) {
    const auto n = v.size();
    if (n >= 50) {
        const double half = 1.96 * std::sqrt(var / static_cast<double>(n));
        return {mean - half, mean + half};
    }
    // Percentile bootstrap for small heavy-tailed batches.
    RngStream rng(ci_seed, 0xb0075743ull ^ n);
    std::vector<double> means(1000);
    for (auto& m : means) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += v[rng.next_u64() % n];
        m = acc / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    return {means[25], means[974]};
}

}  // namespace

double lambda0(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("lambda0: kappa must be > 0");
    return 1.0 - 2.0 / kappa - 3.0 * kappa / 32.0;
}

MomentEstimate negative_moment(std::span<const double> d_samples, double lambda) {
    if (d_samples.empty()) throw std::invalid_argument("negative_moment: empty sample");
    if (lambda < 0.0) throw std::invalid_argument("negative_moment: lambda must be >= 0");
    for (double d : d_samples)
        if (!(d > 0.0)) throw std::invalid_argument("negative_moment: nonpositive diameter");

    auto mean_pow = [lambda](std::span<const double> v) {
        double acc = 0.0;
        for (double d : v) acc += std::pow(d, -lambda);
        return acc / static_cast<double>(v.size());
    };
    MomentEstimate e;
    e.lambda = lambda;
    e.n = d_samples.size();
    e.estimate = mean_pow(d_samples);
    const double half = mean_pow(d_samples.first(std::max<std::size_t>(1, e.n / 2)));
    e.stability_ratio = half > 0.0 ? e.estimate / half : 0.0;
    return e;
}

IntegrandSample integrand_from_samples(Complex z, std::span<const PocketSample> samples,
                                       std::uint64_t ci_seed) {
    IntegrandSample out;
    out.z = z;
    std::vector<double> ratios;
    for (const auto& s : samples) {
        if (!s.usable()) {
            ++out.censored;
            continue;
        }
        if (!(s.area > 0.0)) {
            ++out.censored;
            continue;
        }
        ratios.push_back(s.diameter * s.diameter / s.area);
    }
    if (ratios.empty()) throw std::runtime_error("integrand: all samples censored");
    out.n = ratios.size();
    std::tie(out.mean, out.variance) = mean_var(ratios);
    out.ci95 = ci95_of(ratios, out.mean, out.variance, ci_seed);
    out.biased = static_cast<double>(out.censored) >
                 0.05 * static_cast<double>(out.censored + out.n);
    return out;
}

IntegrandSample integrand_at(Complex z, std::size_t n, const Params& params, bool parallel) {
    if (n < 2) throw std::invalid_argument("integrand_at: need n >= 2");
    if (!(std::abs(z) < 1.0)) throw std::domain_error("integrand_at: |z| must be < 1");
    const auto samples = sample_ensemble(z, params, n, 0, parallel);
    return integrand_from_samples(z, samples, params.seed);
}

IntegralEstimate disk_integral(const std::function<double(Complex)>& f, int strata,
                               int samples_per_stratum, std::uint64_t seed) {
    if (strata < 4) throw std::invalid_argument("disk_integral: need >= 4 strata");
    if (samples_per_stratum < 2)
        throw std::invalid_argument("disk_integral: need >= 2 samples per stratum");

    // Shell radii 0, 1/2, 3/4, ..., 1 - 2^{1-S}, 1: geometric refinement
    // toward the boundary, where the integrand may blow up.
    std::vector<double> edges(static_cast<std::size_t>(strata) + 1);
    edges[0] = 0.0;
    for (int k = 1; k < strata; ++k) edges[static_cast<std::size_t>(k)] = 1.0 - std::pow(2.0, -k);
    edges.back() = 1.0;

    IntegralEstimate est;
    double var_total = 0.0;
    std::vector<double> contributions(static_cast<std::size_t>(strata));
    for (int k = 0; k < strata; ++k) {
        const double r0 = edges[static_cast<std::size_t>(k)];
        const double r1 = edges[static_cast<std::size_t>(k) + 1];
        const double shell_area = kPi * (r1 * r1 - r0 * r0);
        RngStream rng(seed, static_cast<std::uint64_t>(k));
        std::vector<double> vals(static_cast<std::size_t>(samples_per_stratum));
        for (auto& v : vals) {
            // Area-uniform radius within the shell, uniform angle.
            const double u = rng.uniform();
            const double r = std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
            const double ang = 2.0 * kPi * rng.uniform();
            v = f(std::polar(r, ang));
            if (!std::isfinite(v)) v = 0.0;  // measure-zero singular draws
        }
        const auto [m, s2] = mean_var(vals);
        contributions[static_cast<std::size_t>(k)] = shell_area * m;
        est.value += shell_area * m;
        var_total += shell_area * shell_area * s2 / static_cast<double>(samples_per_stratum);
    }
    const double half = 1.96 * std::sqrt(var_total);
    est.ci_lo = est.value - half;
    est.ci_hi = est.value + half;

    // Divergence heuristic: shell contributions of an integrable profile
    // shrink geometrically toward the boundary; a ratio stuck near 1 over
    // the outer shells signals a non-integrable boundary blow-up.
    int stalled = 0;
    for (std::size_t k = contributions.size() - 1;
         k >= 2 && k + 3 >= contributions.size(); --k) {
        if (contributions[k - 1] > 0.0 && contributions[k] / contributions[k - 1] > 0.85)
            ++stalled;
    }
    est.divergent = stalled >= 2;
    return est;
}

BlowupFit boundary_blowup_fit(std::span<const IntegrandSample> samples) {
    std::vector<double> xs, ys;
    for (const auto& s : samples) {
        const double rho = std::abs(s.z);
        if (!(s.mean > 0.0)) throw std::invalid_argument("boundary_blowup_fit: nonpositive mean");
        xs.push_back(-std::log(1.0 - rho));
        ys.push_back(std::log(s.mean));
    }
    if (xs.size() < 4) throw std::invalid_argument("boundary_blowup_fit: need >= 4 radii");
    {
        auto sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i] - sorted[i - 1] < 1e-12)
                throw std::invalid_argument("boundary_blowup_fit: degenerate radii");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    BlowupFit fit;
    fit.alpha = (n * sxy - sx * sy) / denom;
    fit.log_c = (sy - fit.alpha * sx) / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.log_c + fit.alpha * xs[i]);
        ss_res += r * r;
    }
    const double dof = n > 2.0 ? n - 2.0 : 1.0;
    const double se = std::sqrt(ss_res / dof * n / denom);
    fit.alpha_ci_lo = fit.alpha - 1.96 * se;
    fit.alpha_ci_hi = fit.alpha + 1.96 * se;
    return fit;
}

IntegralEstimate radial_profile_integral(std::span<const IntegrandSample> samples,
                                         const BlowupFit& fit) {
    std::vector<std::pair<double, const IntegrandSample*>> pts;
    for (const auto& s : samples) pts.emplace_back(std::abs(s.z), &s);
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (pts.empty()) throw std::invalid_argument("radial_profile_integral: no samples");

    auto shell = [](double m, double r0, double r1) {
        return m * kPi * (r1 * r1 - r0 * r0);
    };
    IntegralEstimate est;
    double prev_r = 0.0;
    double prev_m = pts.front().second->mean;
    double prev_lo = pts.front().second->ci95.first;
    double prev_hi = pts.front().second->ci95.second;
    for (const auto& [r, s] : pts) {
        est.value += shell(0.5 * (prev_m + s->mean), prev_r, r);
        est.ci_lo += shell(0.5 * (prev_lo + s->ci95.first), prev_r, r);
        est.ci_hi += shell(0.5 * (prev_hi + s->ci95.second), prev_r, r);
        prev_r = r;
        prev_m = s->mean;
        prev_lo = s->ci95.first;
        prev_hi = s->ci95.second;
    }
    // Power-law tail C (1-r)^{-alpha} from the fit, anchored at the last
    // sampled radius; closed form of 2 pi int r (1-r)^{-alpha} dr.
    const double alpha = fit.alpha;
    if (alpha >= 1.0) {
        est.divergent = true;
        return est;
    }
    const double u0 = 1.0 - prev_r;  // integrate u = 1-r from 0 to u0
    const double c_anchor = prev_m * std::pow(u0, alpha);
    auto tail = [&](double c) {
        return 2.0 * kPi * c *
               (std::pow(u0, 1.0 - alpha) / (1.0 - alpha) -
                (alpha < 2.0 ? std::pow(u0, 2.0 - alpha) / (2.0 - alpha) : 0.0));
    };
    est.value += tail(c_anchor);
    est.ci_lo += tail(prev_lo * std::pow(u0, alpha));
    est.ci_hi += tail(prev_hi * std::pow(u0, alpha));
    return est;
}

PartialSums partial_sums(std::span<const double> diameters) {
    PartialSums out;
    out.sums.reserve(diameters.size());
    double acc = 0.0;
    for (double d : diameters) {
        if (!(d > 0.0)) throw std::invalid_argument("partial_sums: nonpositive diameter");
        acc += d * d;
        out.sums.push_back(acc);
    }
    if (!out.sums.empty()) {
        const double sn = out.sums.back();
        const double half = out.sums[(out.sums.size() - 1) / 2];
        out.plateau = sn > 0.0 ? (sn - half) / sn : 0.0;
    }
    return out;
}

bool ratio_bound_holds(double diam, double area, double xi, double eps) {
    if (!(diam > 0.0) || !(area > 0.0)) return false;
    const bool in_subset = diam <= eps ? area >= std::pow(diam, 2.0 * xi)
                                       : area >= std::pow(eps, 2.0 * xi);
    if (!in_subset) return true;
    const double ratio = diam * diam / area;
    const double bound = 4.0 / std::pow(eps, 2.0 * xi) + std::pow(diam, -2.0 * (xi - 1.0));
    return ratio <= bound * (1.0 + 1e-12);
}

}  // namespace cle
