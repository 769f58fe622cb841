#include "cle/drivers.hpp"

#include <cmath>
#include <stdexcept>

namespace cle {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Drift increment coeff * cot(theta/2) * dt with the angle clamped theta_eps
// away from the endpoints and the increment capped at one diffusion standard
// deviation, so the boundary neighbourhood cannot produce runaway kicks.
double cot_drift_step(double th, double coeff, double dt, double kappa_prime,
                      double theta_eps) {
    double thc = th;
    if (thc < theta_eps) thc = theta_eps;
    if (thc > kTwoPi - theta_eps) thc = kTwoPi - theta_eps;
    double inc = coeff / std::tan(0.5 * thc) * dt;
    const double cap = std::sqrt(kappa_prime * dt);
    if (inc > cap) inc = cap;
    if (inc < -cap) inc = -cap;
    return inc;
}

}  // namespace

Params Params::make(double kappa, double dt, double t_max, std::uint64_t seed) {
    if (!(kappa > 8.0 / 3.0 && kappa < 8.0) || kappa == 4.0)
        throw std::invalid_argument("Params: kappa must be in (8/3,8) excluding 4");
    Params p;
    p.kappa = kappa;
    p.kappa_prime = kappa < 4.0 ? 16.0 / kappa : kappa;
    p.delta = kappa < 4.0 ? 3.0 - 8.0 / kappa : 0.0;
    p.lambda0 = 1.0 - 2.0 / kappa - 3.0 * kappa / 32.0;
    p.dt = dt;
    p.t_max = t_max;
    p.eps_excursion = 10.0 * std::sqrt(dt);
    p.seed = seed;
    return p;
}

DrivingPath brownian_driver(double kappa, const TimeGrid& grid, RngStream& rng) {
    if (!(kappa > 0.0)) throw std::invalid_argument("brownian_driver: kappa must be > 0");
    DrivingPath d;
    d.grid = grid;
    d.flavor = Flavor::chordal;
    d.w.resize(grid.points());
    d.w[0] = 0.0;
    const double s = std::sqrt(kappa * grid.dt);
    for (std::size_t k = 0; k < grid.n; ++k) d.w[k + 1] = d.w[k] + s * rng.gaussian();
    return d;
}

DrivingPath sle_rho_driver(double kappa, double rho, ForceSide side, const TimeGrid& grid,
                           RngStream& rng) {
    if (!(kappa > 0.0)) throw std::invalid_argument("sle_rho_driver: kappa must be > 0");
    if (!(rho > -2.0))
        throw std::invalid_argument("sle_rho_driver: rho must be > -2 (use bessel_trunk_driver)");
    DrivingPath d;
    d.grid = grid;
    d.flavor = Flavor::chordal;
    d.w.resize(grid.points());
    d.o.resize(grid.points());
    d.w[0] = 0.0;
    d.o[0] = 0.0;
    const double sign = side == ForceSide::right ? 1.0 : -1.0;  // sign of O - W
    const double skdt = std::sqrt(kappa * grid.dt);
    const double floor_d = std::sqrt(grid.dt);  // drift denominator floor
    double w = 0.0, dist = 0.0;                 // dist = |O - W|
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double g = rng.gaussian();
        const double m = dist > floor_d ? dist : floor_d;
        // dW = sqrt(k) dB + rho/(W-O) dt; W - O = -sign*dist.
        w += skdt * g - sign * rho * grid.dt / m;
        // d|O-W| = (2+rho)/|O-W| dt - sign*sqrt(k) dB, reflected at 0.
        dist += (2.0 + rho) * grid.dt / m - sign * skdt * g;
        if (dist < 0.0) dist = -dist;
        d.w[k + 1] = w;
        d.o[k + 1] = w + sign * dist;
    }
    return d;
}

std::vector<ExcursionInterval> find_excursions(const ScalarPath& x, double eps_peak,
                                               double zero_tol) {
    std::vector<ExcursionInterval> out;
    const auto& v = x.values;
    const auto n = v.size();
    std::size_t k = 0;
    while (k < n) {
        while (k < n && v[k] <= zero_tol) ++k;
        if (k >= n) break;
        const std::size_t start = k;
        double peak = 0.0;
        while (k < n && v[k] > zero_tol) {
            peak = std::max(peak, v[k]);
            ++k;
        }
        const std::size_t stop = k;  // first zero index after the run (or n)
        if (peak >= eps_peak) {
            ExcursionInterval e;
            e.alpha = x.grid.time(start > 0 ? start - 1 : 0);
            e.beta = x.grid.time(stop < n ? stop : n - 1);
            e.peak = peak;
            e.sigma = e.beta;
            for (std::size_t j = start; j < stop; ++j) {
                if (v[j] >= eps_peak) {
                    e.sigma = x.grid.time(j);
                    break;
                }
            }
            out.push_back(e);
        }
    }
    return out;
}

std::pair<DrivingPath, std::vector<ExcursionInterval>> bessel_trunk_driver(
    const Params& params, const TimeGrid& grid, RngStream& rng) {
    if (!(params.kappa > 8.0 / 3.0 && params.kappa < 4.0))
        throw std::invalid_argument("bessel_trunk_driver: kappa must be in (8/3,4)");
    const double delta = 3.0 - 8.0 / params.kappa;
    // Squared Bessel by Euler with mirror reflection, keeping the driving
    // Brownian path: the principal value of int dt/X is then recovered from
    // the compensation identity X_t = X_0 + B_t + (delta-1)/2 * I_t, which is
    // the only regularization that actually converges -- any positive-kernel
    // cutoff at eps diverges like eps^(delta-1), because the occupation time
    // of {X < eps} scales as eps^delta for delta in (0,1).
    ScalarPath x(grid, std::vector<double>(grid.points()));
    ScalarPath i_path(grid, std::vector<double>(grid.points()));
    {
        const double sdt = std::sqrt(grid.dt);
        double z = 0.0, b = 0.0;
        x.values[0] = 0.0;
        i_path.values[0] = 0.0;
        for (std::size_t k = 0; k < grid.n; ++k) {
            const double db = sdt * rng.gaussian();
            z += 2.0 * std::sqrt(z) * db + delta * grid.dt;
            if (z < 0.0) z = -z;
            b += db;
            x.values[k + 1] = std::sqrt(z);
            i_path.values[k + 1] = 2.0 * (x.values[k + 1] - b) / (delta - 1.0);
        }
    }

    // Force point below the driving: dO = 2 dt/(O-W) = -2 dt/(sqrt(k) X), so
    // O = -(2/sqrt(k)) I and W = O + sqrt(k) X; the X drift then gives W the
    // SLE_kappa(kappa-6) drift exactly.
    const double sk = std::sqrt(params.kappa);
    DrivingPath d;
    d.grid = grid;
    d.flavor = Flavor::chordal;
    d.w.resize(grid.points());
    d.o.resize(grid.points());
    for (std::size_t k = 0; k < grid.points(); ++k) {
        d.o[k] = -2.0 / sk * i_path.values[k];
        d.w[k] = sk * x.values[k] + d.o[k];
    }
    const double eps_exc =
        params.eps_excursion > 0.0 ? params.eps_excursion : 10.0 * std::sqrt(grid.dt);
    auto exc = find_excursions(x, eps_exc, std::sqrt(grid.dt));
    return {std::move(d), std::move(exc)};
}

ThetaPath radial_theta_driver(double kappa_prime, double rho, double theta0,
                              const TimeGrid& grid, RngStream& rng, double theta_eps) {
    if (!(rho > -kappa_prime / 2.0 - 2.0))
        throw std::invalid_argument("radial_theta_driver: need rho > -kappa'/2 - 2");
    if (theta0 < 0.0 || theta0 > kTwoPi)
        throw std::invalid_argument("radial_theta_driver: theta0 must be in [0,2pi]");
    ThetaPath p;
    p.grid = grid;
    p.theta.resize(grid.points());
    p.theta[0] = theta0;
    const double skdt = std::sqrt(kappa_prime * grid.dt);
    const double c = (rho + 2.0) / 2.0;
    double th = theta0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        th += cot_drift_step(th, c, grid.dt, kappa_prime, theta_eps) + skdt * rng.gaussian();
        // Mirror reflection into [0, 2pi]; a crossing counts as a boundary hit.
        for (int guard = 0; guard < 64 && (th < 0.0 || th > kTwoPi); ++guard) {
            if (th < 0.0) {
                th = -th;
                p.boundary_hits.emplace_back(grid.time(k + 1), 0);
            } else {
                th = 2.0 * kTwoPi - th;
                p.boundary_hits.emplace_back(grid.time(k + 1), 1);
            }
        }
        p.theta[k + 1] = th;
    }
    return p;
}

DrivingPath radial_arg_driver(const ThetaPath& theta, double kappa_prime, double rho,
                              double arg_w0, RngStream rng, double theta_eps) {
    const TimeGrid& grid = theta.grid;
    if (theta.theta.size() != grid.points())
        throw std::invalid_argument("radial_arg_driver: malformed theta path");
    DrivingPath d;
    d.grid = grid;
    d.flavor = Flavor::radial;
    d.w.resize(grid.points());
    d.o.resize(grid.points());
    d.w[0] = arg_w0;
    d.o[0] = arg_w0 - theta.theta[0];
    const double skdt = std::sqrt(kappa_prime * grid.dt);
    const double cdrift = (rho + 2.0) / 2.0;
    double aw = arg_w0;
    std::size_t verified = 0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double g = rng.gaussian();
        const double th0 = theta.theta[k];
        // Spot-check that this stream reproduces the theta increments (only
        // meaningful on steps without reflection).
        if (verified < 16) {
            const double th1 = theta.theta[k + 1];
            if (th1 > 0.0 && th1 < kTwoPi) {
                const double pred =
                    th0 + cot_drift_step(th0, cdrift, grid.dt, kappa_prime, theta_eps) + skdt * g;
                if (pred >= 0.0 && pred <= kTwoPi) {
                    if (std::abs(pred - th1) > 1e-9)
                        throw std::logic_error(
                            "radial_arg_driver: rng stream does not match theta path");
                    ++verified;
                }
            }
        }
        aw += skdt * g + cot_drift_step(th0, 0.5 * rho, grid.dt, kappa_prime, theta_eps);
        d.w[k + 1] = aw;
        d.o[k + 1] = aw - theta.theta[k + 1];
    }
    return d;
}

}  // namespace cle
