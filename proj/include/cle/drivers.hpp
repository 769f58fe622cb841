#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cle/grid.hpp"
#include "cle/loewner.hpp"
#include "cle/rng.hpp"
#include "cle/sde.hpp"

namespace cle {

// Simulation parameters shared across the stochastic modules.  kappa is the
// CLE parameter in (8/3,8)\{4}; the derived quantities follow the usual
// conventions: kappa' = 16/kappa for kappa < 4 (else kappa itself),
// delta = 3 - 8/kappa (Bessel dimension, kappa < 4 only) and
// lambda0 = 1 - 2/kappa - 3 kappa/32.
struct Params {
    double kappa = 6.0;
    double kappa_prime = 6.0;
    double delta = 0.0;          // valid only when kappa < 4
    double lambda0 = 0.0;
    double dt = 1e-3;
    double t_max = 50.0;
    double eps_reg = 1e-4;
    double eps_excursion = 0.0;  // default 10*sqrt(dt)
    double theta_eps = 1e-6;     // cot clamp for the theta drift (radians)
    int raster_resolution = 256;
    int trace_vertices = 400;
    int max_recursion = 8;
    std::uint64_t seed = 1;

    static Params make(double kappa, double dt, double t_max, std::uint64_t seed);
    bool simple_regime() const { return kappa < 4.0; }
};

struct ExcursionInterval {
    double alpha = 0.0;  // last zero before the excursion
    double sigma = 0.0;  // first time the path reaches the eps threshold
    double beta = 0.0;   // first zero after
    double peak = 0.0;
};

struct ThetaPath {
    TimeGrid grid;
    std::vector<double> theta;  // values in [0, 2pi]
    // Boundary visits recorded during simulation: (time, endpoint) with
    // endpoint 0 for theta = 0 and 1 for theta = 2pi.
    std::vector<std::pair<double, int>> boundary_hits;
};

enum class ForceSide { left, right };

// W = sqrt(kappa) B with W_0 = 0.
DrivingPath brownian_driver(double kappa, const TimeGrid& grid, RngStream& rng);

// SLE_kappa(rho) driving pair for rho > -2, force point at 0^+/0^- per side.
// Simulated through the difference process D = |O - W| (a reflected linear
// SDE) so that rho = 0 collapses exactly to brownian_driver on the same
// stream.
DrivingPath sle_rho_driver(double kappa, double rho, ForceSide side, const TimeGrid& grid,
                           RngStream& rng);

// The Bessel / principal-value construction for rho = kappa - 6 < -2,
// kappa in (8/3,4): X a Bessel path of dimension delta = 3 - 8/kappa built
// as the square root of a squared Bessel path and I the principal value of
// int 1/X dt, recovered via the compensation identity
// I = 2(X - B)/(delta - 1); then O = -(2/sqrt(kappa)) I and
// W = O + sqrt(kappa) X.  Excursions of X above eps_excursion are
// enumerated alongside.
std::pair<DrivingPath, std::vector<ExcursionInterval>> bessel_trunk_driver(
    const Params& params, const TimeGrid& grid, RngStream& rng);

// Excursion scan used by bessel_trunk_driver; exposed for oracles.  Grid
// points with X <= zero_tol count as zeros.
std::vector<ExcursionInterval> find_excursions(const ScalarPath& x, double eps_peak,
                                               double zero_tol);

// Radial theta process on [0, 2pi] with mirror reflection at the endpoints
// and the cot drift clamped theta_eps away from them.
ThetaPath radial_theta_driver(double kappa_prime, double rho, double theta0,
                              const TimeGrid& grid, RngStream& rng, double theta_eps = 1e-6);

// arg W companion built from the same Brownian increments; `rng` must be a
// copy of the stream passed to radial_theta_driver in its pre-run state
// (this is checked by replaying the theta recursion).
DrivingPath radial_arg_driver(const ThetaPath& theta, double kappa_prime, double rho,
                              double arg_w0, RngStream rng, double theta_eps = 1e-6);

}  // namespace cle
