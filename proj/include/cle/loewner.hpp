#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cle/conformal.hpp"
#include "cle/grid.hpp"

namespace cle {

enum class Flavor { chordal, radial };

// Discretized driving process.  Chordal: w holds W_t.  Radial: w holds the
// unwrapped real angle arg W_t; the boundary point e^{i w} is formed at use
// sites so there are no branch-cut issues.  o, when present, is the
// force-point image O_t (chordal) or unwrapped arg O_t (radial).
struct DrivingPath {
    TimeGrid grid;
    std::vector<double> w;
    std::vector<double> o;  // empty when absent
    Flavor flavor = Flavor::chordal;

    bool has_force_point() const { return !o.empty(); }
    double w_at(double t) const;  // linear interpolation between grid points
};

struct ForwardResult {
    Complex g{};         // image when not swallowed; last pre-swallow image otherwise
    bool swallowed = false;
    double tau = 0.0;    // swallow time when swallowed
};

struct SwallowReport {
    Complex z{};
    bool swallowed = false;
    double tau = 0.0;
    Complex last_image{};
};

// Solves the chordal Loewner equation for g_t(z), stepping with exact
// vertical-slit maps for piecewise-constant driving.  Swallowing is detected
// when |g - W| drops below 2*sqrt(2 dt) (the reach of a square-root
// singularity in one step) and the swallow time is refined by bisecting the
// step with matching threshold.
ForwardResult chordal_forward(const DrivingPath& driving, Complex z, double t);

// Radial counterpart (RK4 on the radial Loewner vector field).
ForwardResult radial_forward(const DrivingPath& driving, Complex z, double t);

// One closest-approach event of g_t(z) to the driving point: the bisected
// approach time, the image there, and the residual gap |g - W|.
struct ApproachEvent {
    Complex g{};
    double tau = 0.0;
    double gap = 0.0;
};

// Every closest-approach event of the chordal flow up to time t, in order.
// The discrete flow cannot tell a genuine pinch-off from a near miss: with a
// piecewise-linear driving path both stall at a gap set by the per-step
// driving increment, so swallow decisions that matter geometrically (does a
// traced loop actually enclose z?) are made by the caller from this list.
// threshold_scale widens the detection band (gaps at genuine pinches are of
// the order of one driving increment and can exceed the one-step reach).
std::vector<ApproachEvent> chordal_approaches(const DrivingPath& driving, Complex z, double t,
                                              std::size_t max_events = 64,
                                              double threshold_scale = 1.0);

SwallowReport swallow_time(const DrivingPath& driving, Complex z);

struct Trace {
    std::vector<Complex> vertices;
    std::vector<double> capacity_times;
    Flavor domain = Flavor::chordal;
    std::vector<double> tip_residuals;  // forward re-check on a subsample; NaN where skipped
};

struct TraceOptions {
    std::size_t stride = 1;        // emit every stride-th grid time
    std::size_t first = 0;         // first grid index to emit
    std::size_t last = 0;          // last grid index (0 -> grid.n)
    std::size_t residual_checks = 32;
    bool parallel = true;
};

// Extracts the Loewner trace by reverse composition of per-step elementary
// maps (chordal) or by running the Loewner flow backwards (radial).  Each
// vertex is independent, so the parallel variant fans out over vertices; the
// serial variant is the reference used in tests and benchmarks.
Trace trace(const DrivingPath& driving, const TraceOptions& opt = {});
Trace trace_serial(const DrivingPath& driving, const TraceOptions& opt = {});

// Single trace vertex eta(t_k) (exposed for samplers that need only a window).
Complex trace_vertex(const DrivingPath& driving, std::size_t k);

// Preimage under g_{t_k} of the boundary point xi: the prime end of the hull
// complement that maps to xi.  With xi = O_{t_k} this is the point the tip
// touches when the driving pair collides (the seal point of a pinch).
Complex chordal_boundary_preimage(const DrivingPath& driving, std::size_t k, double xi);

}  // namespace cle
