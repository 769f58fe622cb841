#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "cle/sampler.hpp"

namespace cle {

// Monte Carlo estimate of E[diam^2/area] for pockets at one target point.
struct IntegrandSample {
    Complex z{};
    std::size_t n = 0;         // usable samples entering the mean
    std::size_t censored = 0;  // censored or flagged samples (excluded)
    double mean = 0.0;
    double variance = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};
    bool biased = false;  // censoring rate above 5%
};

struct MomentEstimate {
    double lambda = 0.0;
    std::size_t n = 0;
    double estimate = 0.0;
    double stability_ratio = 0.0;  // full-sample vs first-half estimate
};

struct IntegralEstimate {
    double value = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    bool divergent = false;  // boundary shells refuse to decay
};

struct BlowupFit {
    double alpha = 0.0;  // slope of log(mean) vs -log(1-rho)
    double alpha_ci_lo = 0.0;
    double alpha_ci_hi = 0.0;
    double log_c = 0.0;  // intercept
};

// 1 - 2/kappa - 3*kappa/32; positive exactly on (8/3, 8).
double lambda0(double kappa);

// Mean of d^(-lambda) with a half-sample stability diagnostic.
MomentEstimate negative_moment(std::span<const double> d_samples, double lambda);

// n pocket samples at z (streams 0..n-1 of params.seed), reduced to the
// diam^2/area statistic.  Throws std::runtime_error when nothing is usable.
IntegrandSample integrand_at(Complex z, std::size_t n, const Params& params,
                             bool parallel = true);

// Same reduction over already-drawn samples.
IntegrandSample integrand_from_samples(Complex z, std::span<const PocketSample> samples,
                                       std::uint64_t ci_seed = 1);

// Stratified Monte Carlo of int_D f dA over geometrically boundary-refining
// radial shells.  The divergence detector fires when the outermost shell
// contributions stop decaying.
IntegralEstimate disk_integral(const std::function<double(Complex)>& f, int strata,
                               int samples_per_stratum, std::uint64_t seed = 1);

// Least-squares fit of log(mean) against -log(1-|z|); needs >= 4 distinct
// radii with positive means.
BlowupFit boundary_blowup_fit(std::span<const IntegrandSample> samples);

// Integral of the fitted/interpolated radial profile over the disk: exact
// trapezoid on the sampled radii plus the closed-form power-law tail.
IntegralEstimate radial_profile_integral(std::span<const IntegrandSample> samples,
                                         const BlowupFit& fit);

struct PartialSums {
    std::vector<double> sums;  // S_N = sum of the N largest squared diameters
    double plateau = 0.0;      // (S_N - S_{N/2}) / S_N
};

// Cumulative squared-diameter sums of a list ordered by decreasing diameter.
PartialSums partial_sums(std::span<const double> diameters);

// Arithmetic form of the diam^2/area bound: on the subset where
// area >= diam^(2 xi) (diam <= eps) or area >= eps^(2 xi) (diam > eps),
// the ratio is bounded by 4/eps^(2 xi) + diam^(-2(xi-1)).  Returns true when
// the sample is outside the subset or satisfies the bound.
bool ratio_bound_holds(double diam, double area, double xi, double eps);

}  // namespace cle
