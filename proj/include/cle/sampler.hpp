#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cle/drivers.hpp"
#include "cle/geometry.hpp"
#include "cle/loewner.hpp"

namespace cle {

// One sampled complementary component (pocket) of the loop-ensemble
// carpet/gasket, together with its measured geometry.  `boundary` is the
// closed polyline in original disk coordinates; `region` the rasterized
// interior component containing `target`.  Samples with `censored` or
// `flagged` set are excluded from statistics but still reported.
struct PocketSample {
    Complex target{};
    double kappa = 0.0;
    std::vector<Complex> boundary;
    RasterRegion region;
    double diameter = 0.0;
    double area = 0.0;
    double dist = 0.0;     // target to region boundary
    double cr_lo = 0.0;    // Koebe bracket dist/4 ..
    double cr_hi = 0.0;    // .. 4*dist
    double cr_zipper = std::numeric_limits<double>::quiet_NaN();  // filled on demand
    double tau = 0.0;
    double tau_prime = 0.0;
    std::uint64_t seed = 0;
    int generation_count = 0;
    bool censored = false;
    bool flagged = false;

    // Diagnostics (not serialized).
    int winding = 0;
    double gap_fraction = 0.0;  // closure gap / polyline diameter
    double theta_at_tau = std::numeric_limits<double>::quiet_NaN();
    double theta_at_tau_prime = std::numeric_limits<double>::quiet_NaN();
    double diameter_centered = 0.0;  // before the Mobius map-back (gasket path)
    std::size_t excursion_index = static_cast<std::size_t>(-1);

    bool usable() const { return !censored && !flagged; }
};

struct Disconnection {
    bool trunk = true;
    std::size_t excursion = static_cast<std::size_t>(-1);
};

// Which part of the exploration disconnected the point: an excursion loop
// (swallow time strictly inside some excursion interval) or the trunk.
Disconnection classify_disconnection(const DrivingPath& driving,
                                     const std::vector<ExcursionInterval>& excursions,
                                     const SwallowReport& swallow);

// Pocket of the kappa' in (4,8) ensemble at z: radial exploration of the
// theta process started at 2pi with rho = kappa'-6; the pocket boundary is
// the trace over [tau', tau].
PocketSample sample_pocket_gasket(Complex z, const Params& params, RngStream& rng);

// Loop of the kappa in (8/3,4) ensemble surrounding z: iterated chordal
// exploration, recursing through trunk disconnections via numerical Riemann
// maps until an excursion loop captures the target.
PocketSample sample_loop_carpet(Complex z, const Params& params, RngStream& rng);

// n independent samples with stream ids first_stream..first_stream+n-1;
// output order is by stream id regardless of thread count.
std::vector<PocketSample> sample_ensemble(Complex z, const Params& params, std::size_t n,
                                          std::uint64_t first_stream = 0, bool parallel = true);

// Conformal radius of the pocket seen from the target via a dedicated
// Riemann map of the boundary polyline; also stored into s.cr_zipper.
double pocket_zipper_cr(PocketSample& s, int resample = 0);

}  // namespace cle
