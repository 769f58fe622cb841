#include "cle/loewner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cle {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sqrt((d)^2 + c) with the branch matching the chordal slit maps: the real
// part keeps the sign of Re(d) and the imaginary part is nonnegative.
inline Complex slit_sqrt(Complex d, double c) {
    Complex s = std::sqrt(d * d + c);
    if (d.real() < 0.0) s = -s;
    if (s.imag() < 0.0) s = Complex(s.real(), 0.0);
    return s;
}

inline double swallow_threshold(double h) { return 2.0 * std::sqrt(2.0 * h); }

inline Complex radial_field(Complex g, Complex w) {
    return g * (w + g) / (w - g);
}

inline Complex radial_rk4(Complex g, double t, double h, const DrivingPath& d) {
    const Complex w1 = std::polar(1.0, d.w_at(t));
    const Complex w2 = std::polar(1.0, d.w_at(t + 0.5 * h));
    const Complex w3 = std::polar(1.0, d.w_at(t + h));
    const Complex k1 = radial_field(g, w1);
    const Complex k2 = radial_field(g + 0.5 * h * k1, w2);
    const Complex k3 = radial_field(g + 0.5 * h * k2, w2);
    const Complex k4 = radial_field(g + h * k3, w3);
    return g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double DrivingPath::w_at(double t) const {
    if (t <= grid.t0) return w.front();
    const double s = (t - grid.t0) / grid.dt;
    const auto k = static_cast<std::size_t>(s);
    if (k >= grid.n) return w.back();
    const double f = s - static_cast<double>(k);
    return w[k] + f * (w[k + 1] - w[k]);
}

ForwardResult chordal_forward(const DrivingPath& driving, Complex z, double t) {
    if (driving.flavor != Flavor::chordal)
        throw std::invalid_argument("chordal_forward: driving is not chordal");
    if (!(z.imag() > 0.0)) throw std::domain_error("chordal_forward: Im z must be > 0");
    if (t > driving.grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("chordal_forward: t beyond grid horizon");

    Complex g = z;
    double now = driving.grid.t0;
    while (now < t - 1e-15) {
        const double h = std::min(driving.grid.dt, t - now);
        const double wr = driving.w_at(now + h);
        Complex next = wr + slit_sqrt(g - wr, 4.0 * h);
        if (std::abs(next - wr) < swallow_threshold(h)) {
            // Bisect the step: halve the window, follow whichever half holds
            // the candidate swallow, until the window is negligible.
            double tau = now, hb = h;
            Complex glo = g;
            for (int it = 0; it < 40 && hb > 1e-16; ++it) {
                hb *= 0.5;
                const double wm = driving.w_at(tau + hb);
                const Complex mid = wm + slit_sqrt(glo - wm, 4.0 * hb);
                if (std::abs(mid - wm) < swallow_threshold(hb)) continue;  // first half
                glo = mid;
                tau += hb;
            }
            return {glo, true, tau + hb};
        }
        g = next;
        now += h;
    }
    return {g, false, 0.0};
}

std::vector<ApproachEvent> chordal_approaches(const DrivingPath& driving, Complex z, double t,
                                              std::size_t max_events, double threshold_scale) {
    if (driving.flavor != Flavor::chordal)
        throw std::invalid_argument("chordal_approaches: driving is not chordal");
    if (!(z.imag() > 0.0)) throw std::domain_error("chordal_approaches: Im z must be > 0");
    if (t > driving.grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("chordal_approaches: t beyond grid horizon");

    const double scale = std::max(threshold_scale, 1.0);
    std::vector<ApproachEvent> events;
    Complex g = z;
    double now = driving.grid.t0;
    while (now < t - 1e-15) {
        const double h = std::min(driving.grid.dt, t - now);
        const double wr = driving.w_at(now + h);
        const Complex next = wr + slit_sqrt(g - wr, 4.0 * h);
        if (std::abs(next - wr) < scale * swallow_threshold(h)) {
            double tau = now, hb = h;
            Complex glo = g;
            for (int it = 0; it < 40 && hb > 1e-16; ++it) {
                hb *= 0.5;
                const double wm = driving.w_at(tau + hb);
                const Complex mid = wm + slit_sqrt(glo - wm, 4.0 * hb);
                if (std::abs(mid - wm) < scale * swallow_threshold(hb)) continue;
                glo = mid;
                tau += hb;
            }
            events.push_back({glo, tau + hb, std::abs(glo - driving.w_at(tau + hb))});
            if (events.size() >= max_events) return events;
        }
        g = next;
        now += h;
    }
    return events;
}

ForwardResult radial_forward(const DrivingPath& driving, Complex z, double t) {
    if (driving.flavor != Flavor::radial)
        throw std::invalid_argument("radial_forward: driving is not radial");
    if (!(std::abs(z) < 1.0)) throw std::domain_error("radial_forward: |z| must be < 1");
    if (t > driving.grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("radial_forward: t beyond grid horizon");

    Complex g = z;
    double now = driving.grid.t0;
    {
        const Complex w0 = std::polar(1.0, driving.w_at(now));
        if (std::abs(g - w0) < swallow_threshold(driving.grid.dt)) return {g, true, now};
    }
    while (now < t - 1e-15) {
        const double h = std::min(driving.grid.dt, t - now);
        Complex next = radial_rk4(g, now, h, driving);
        const Complex wr = std::polar(1.0, driving.w_at(now + h));
        if (std::abs(next - wr) < swallow_threshold(h) || std::abs(next) > 1.0 + 1e-9) {
            double tau = now, hb = h;
            Complex glo = g;
            for (int it = 0; it < 40 && hb > 1e-16; ++it) {
                hb *= 0.5;
                const Complex mid = radial_rk4(glo, tau, hb, driving);
                const Complex wm = std::polar(1.0, driving.w_at(tau + hb));
                if (std::abs(mid - wm) < swallow_threshold(hb) || std::abs(mid) > 1.0 + 1e-9)
                    continue;
                glo = mid;
                tau += hb;
            }
            return {glo, true, tau + hb};
        }
        g = next;
        now += h;
    }
    return {g, false, 0.0};
}

SwallowReport swallow_time(const DrivingPath& driving, Complex z) {
    const auto res = driving.flavor == Flavor::chordal
                         ? chordal_forward(driving, z, driving.grid.horizon())
                         : radial_forward(driving, z, driving.grid.horizon());
    SwallowReport rep;
    rep.z = z;
    rep.swallowed = res.swallowed;
    rep.tau = res.swallowed ? res.tau : std::numeric_limits<double>::infinity();
    rep.last_image = res.g;
    return rep;
}

Complex chordal_boundary_preimage(const DrivingPath& driving, std::size_t k, double xi) {
    if (driving.flavor != Flavor::chordal)
        throw std::invalid_argument("chordal_boundary_preimage: driving is not chordal");
    const double h = driving.grid.dt;
    Complex z = xi;
    for (std::size_t j = k; j >= 1; --j) {
        const double wj = driving.w[j];
        Complex s = std::sqrt((z - wj) * (z - wj) - 4.0 * h);
        if (z.real() - wj < 0.0) s = -s;
        if (s.imag() < 0.0) s = Complex(s.real(), -s.imag());
        z = wj + s;
    }
    return z;
}

Complex trace_vertex(const DrivingPath& driving, std::size_t k) {
    const double h = driving.grid.dt;
    if (driving.flavor == Flavor::chordal)
        return chordal_boundary_preimage(driving, k, driving.w[k]);
    // Radial: compose closed-form inverse slit maps.  With K(u) = u/(1+u)^2
    // the constant-driving flow satisfies K(u_out) = e^h K(u_in), so each
    // backward step is z -> e^{iw} K^{-1}(e^{-h} K(z e^{-iw})).  Evaluating
    // the tip as a boundary point (no interior offset) keeps vertices on the
    // curve even deep inside pinched-off crevices, where a backward ODE from
    // an offset start collapses into the bulk of the domain.
    if (k == 0) return std::polar(1.0, driving.w[0]);
    const double shrink = std::exp(-h);
    Complex z = std::polar(1.0, driving.w[k]);
    for (std::size_t j = k; j >= 1; --j) {
        const Complex rot = std::polar(1.0, driving.w[j]);
        const Complex u = z / rot;
        const Complex opu = 1.0 + u;
        const Complex q = shrink * u / (opu * opu);
        // Stable branch of K^{-1}: 2q / (1 - 2q + sqrt(1 - 4q)); q never
        // lands on the cut [1/4, inf) because K(D) misses it.
        z = rot * (2.0 * q / (1.0 - 2.0 * q + std::sqrt(1.0 - 4.0 * q)));
    }
    return z;
}

namespace {

Trace trace_impl(const DrivingPath& driving, const TraceOptions& opt, bool parallel) {
    const std::size_t last = opt.last == 0 ? driving.grid.n : opt.last;
    if (last > driving.grid.n || opt.first > last)
        throw std::invalid_argument("trace: window outside grid");
    const std::size_t stride = opt.stride == 0 ? 1 : opt.stride;

    std::vector<std::size_t> idx;
    for (std::size_t k = opt.first; k <= last; k += stride) idx.push_back(k);
    if (idx.back() != last) idx.push_back(last);

    Trace tr;
    tr.domain = driving.flavor;
    tr.vertices.resize(idx.size());
    tr.capacity_times.resize(idx.size());
    tr.tip_residuals.assign(idx.size(), kNaN);

    const auto count = static_cast<std::ptrdiff_t>(idx.size());
    std::ptrdiff_t bad = -1;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const std::size_t k = idx[static_cast<std::size_t>(i)];
        const Complex v = trace_vertex(driving, k);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
#pragma omp critical
            bad = static_cast<std::ptrdiff_t>(k);
        }
        tr.vertices[static_cast<std::size_t>(i)] = v;
        tr.capacity_times[static_cast<std::size_t>(i)] = driving.grid.time(k);
    }
    if (bad >= 0) throw std::runtime_error("trace-failure at step " + std::to_string(bad));

    // Forward re-check on an evenly spaced subsample.
    const std::size_t checks = std::min<std::size_t>(opt.residual_checks, idx.size());
    for (std::size_t c = 0; c < checks; ++c) {
        const std::size_t i = c * (idx.size() - 1) / (checks > 1 ? checks - 1 : 1);
        const std::size_t k = idx[i];
        if (k == 0) continue;
        const double t = driving.grid.time(k);
        Complex v = tr.vertices[i];
        double resid;
        if (driving.flavor == Flavor::chordal) {
            if (v.imag() <= 0.0) v = Complex(v.real(), 1e-12);
            const auto fr = chordal_forward(driving, v, t);
            resid = std::abs(fr.g - driving.w_at(fr.swallowed ? fr.tau : t));
        } else {
            if (std::abs(v) >= 1.0) v *= (1.0 - 1e-12) / std::abs(v);
            const auto fr = radial_forward(driving, v, t);
            resid = std::abs(fr.g - std::polar(1.0, driving.w_at(fr.swallowed ? fr.tau : t)));
        }
        tr.tip_residuals[i] = resid;
    }
    return tr;
}

}  // namespace

Trace trace(const DrivingPath& driving, const TraceOptions& opt) {
    return trace_impl(driving, opt, opt.parallel);
}

Trace trace_serial(const DrivingPath& driving, const TraceOptions& opt) {
    return trace_impl(driving, opt, false);
}

}  // namespace cle
