#include "cle/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

// Geodesic variant of the zipper algorithm (Marshall-Rohde family).  The
// boundary polyline is unzipped vertex by vertex: an initial square-root map
// opens the first edge onto the real line, then every further vertex is
// absorbed by removing the hyperbolic geodesic from the current tip (at 0)
// to the vertex image.  Each elementary map is a real Mobius transform that
// straightens the geodesic into a vertical segment, followed by the vertical
// slit map sqrt(z^2 + h^2).  The final edge is closed with a quadrant map.
// All pieces have closed-form inverses and derivatives, so forward, inverse
// and the basepoint derivative are exact compositions; the only
// approximation is geodesic-for-edge, which shrinks with the data spacing.

namespace cle {
namespace {

// sqrt(z^2 + h^2) with the branch that is the identity near infinity in H.
inline Complex vslit_forward(Complex z, double h) {
    Complex s = std::sqrt(z * z + h * h);
    if (z.real() < 0.0) s = -s;
    if (s.imag() < 0.0) s = Complex(s.real(), 0.0);
    return s;
}

inline Complex vslit_inverse(Complex w, double h) {
    Complex s = std::sqrt(w * w - h * h);
    if (w.real() < 0.0) s = -s;
    if (s.imag() < 0.0) s = Complex(s.real(), -s.imag());
    return s;
}

struct GeodesicStep {
    double c = 0.0;  // Mobius pole; unused when the geodesic is already vertical
    double h = 0.0;  // vertical slit height after the Mobius
    double s = 1.0;  // renormalization: divide after the slit so images stay O(1)
    bool has_mobius = false;

    Complex forward(Complex z) const {
        if (has_mobius) z = z / (1.0 - z / c);
        return vslit_forward(z, h) / s;
    }
    Complex inverse(Complex w) const {
        Complex z = vslit_inverse(w * s, h);
        if (has_mobius) z = z / (1.0 + z / c);
        return z;
    }
    Complex dforward(Complex z) const {
        Complex m = z, dm = 1.0;
        if (has_mobius) {
            const Complex d = 1.0 - z / c;
            m = z / d;
            dm = 1.0 / (d * d);
        }
        return dm * m / (s * vslit_forward(m, h));
    }
};

Complex opening_forward(Complex z, Complex p0, Complex p1) {
    // The open edge (p0,p1) maps to the negative reals, so the principal
    // branch is continuous on the complement and i*sqrt lands in H.
    return Complex(0, 1) * std::sqrt((z - p1) / (z - p0));
}

Complex opening_inverse(Complex w, Complex p0, Complex p1) {
    const Complex m = -(w * w);
    return (p1 - p0 * m) / (1.0 - m);
}

Complex opening_dforward(Complex z, Complex p0, Complex p1) {
    const Complex m = (z - p1) / (z - p0);
    const Complex dm = (p1 - p0) / ((z - p0) * (z - p0));
    return Complex(0, 1) * 0.5 / std::sqrt(m) * dm;
}

Complex closing_forward(Complex z, bool second_quadrant) {
    if (second_quadrant) return 1.0 / (z * z);
    return z * z;
}

Complex closing_inverse(Complex w, bool second_quadrant) {
    Complex z = std::sqrt(w);
    if (z.imag() < 0.0) z = -z;
    if (second_quadrant) z = -1.0 / z;
    return z;
}

Complex closing_dforward(Complex z, bool second_quadrant) {
    if (second_quadrant) return -2.0 / (z * z * z);
    return 2.0 * z;
}

double polygon_signed_area(std::span<const Complex> p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Complex& u = p[i];
        const Complex& v = p[(i + 1) % p.size()];
        a += u.real() * v.imag() - v.real() * u.imag();
    }
    return 0.5 * a;
}

bool point_in_polygon(std::span<const Complex> p, Complex z) {
    bool in = false;
    for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
        if ((p[i].imag() > z.imag()) != (p[j].imag() > z.imag())) {
            const double x = p[j].real() + (z.imag() - p[j].imag()) /
                                               (p[i].imag() - p[j].imag()) *
                                               (p[i].real() - p[j].real());
            if (z.real() < x) in = !in;
        }
    }
    return in;
}

std::vector<Complex> resample_closed(std::span<const Complex> p, std::size_t target) {
    std::vector<double> cum(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        cum[i + 1] = cum[i] + std::abs(p[(i + 1) % p.size()] - p[i]);
    const double total = cum.back();
    std::vector<Complex> out;
    out.reserve(target);
    for (std::size_t k = 0; k < target; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(target);
        auto it = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t i = static_cast<std::size_t>(it - cum.begin());
        i = i > 0 ? i - 1 : 0;
        if (i >= p.size()) i = p.size() - 1;
        const double seg = cum[i + 1] - cum[i];
        const double f = seg > 0.0 ? (s - cum[i]) / seg : 0.0;
        out.push_back(p[i] + f * (p[(i + 1) % p.size()] - p[i]));
    }
    return out;
}

}  // namespace

struct NumericalRiemannMap::Impl {
    Complex p0, p1;
    std::vector<GeodesicStep> steps;
    bool second_quadrant = false;
    Complex cayley_a{};  // image of the basepoint in H
};

Complex NumericalRiemannMap::forward(Complex z) const {
    const Impl& im = *impl_;
    Complex w = opening_forward(z, im.p0, im.p1);
    for (const auto& s : im.steps) w = s.forward(w);
    w = closing_forward(w, im.second_quadrant);
    return (w - im.cayley_a) / (w - std::conj(im.cayley_a));
}

Complex NumericalRiemannMap::inverse(Complex v) const {
    const Impl& im = *impl_;
    Complex w = (im.cayley_a - std::conj(im.cayley_a) * v) / (1.0 - v);
    w = closing_inverse(w, im.second_quadrant);
    for (auto it = im.steps.rbegin(); it != im.steps.rend(); ++it) w = it->inverse(w);
    return opening_inverse(w, im.p0, im.p1);
}

NumericalRiemannMap riemann_map_zipper(std::span<const Complex> boundary, Complex basepoint,
                                       int resample) {
    if (boundary.size() < 3) throw std::invalid_argument("riemann_map_zipper: need >= 3 vertices");

    std::vector<Complex> pts(boundary.begin(), boundary.end());
    if (pts.size() > 3 && std::abs(pts.front() - pts.back()) < 1e-15) pts.pop_back();
    if (polygon_signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
    if (!point_in_polygon(pts, basepoint))
        throw std::domain_error("riemann_map_zipper: basepoint outside boundary");
    if (resample > 2) pts = resample_closed(pts, static_cast<std::size_t>(resample));

    auto impl = std::make_shared<NumericalRiemannMap::Impl>();
    impl->p0 = pts[0];
    impl->p1 = pts[1];

    const std::size_t n = pts.size();
    impl->steps.reserve(n - 2);
    Complex base_img = opening_forward(basepoint, impl->p0, impl->p1);

    for (std::size_t k = 2; k < n; ++k) {
        Complex w = opening_forward(pts[k], impl->p0, impl->p1);
        for (const auto& s : impl->steps) w = s.forward(w);
        const double mag = std::abs(w);
        if (mag < 1e-13) continue;  // duplicate of the current tip
        // An image on the real axis means the vertex is numerically
        // indistinguishable from boundary that is already unzipped; a step
        // built from it (slit height |w|^2/Im w) would crush the whole
        // half-plane onto the axis, so drop the vertex instead.
        if (w.imag() < 1e-9 * mag) continue;
        GeodesicStep step;
        const double a = w.real(), b = w.imag();
        if (std::abs(a) > 1e-13 * mag) {
            step.has_mobius = true;
            step.c = std::norm(w) / a;
            step.h = std::norm(w) / b;  // |mu(w)|: mu sends the geodesic to [0, i h]
        } else {
            step.h = b;
        }
        // Rough boundary data (raster staircases) compounds corner expansions
        // multiplicatively, overflowing double range within a few hundred
        // steps; rescaling each step by its slit height keeps every
        // intermediate image O(1) without changing the composed map.
        step.s = step.h;
        base_img = step.forward(base_img);
        impl->steps.push_back(step);
    }

    impl->second_quadrant = base_img.real() < 0.0;
    base_img = closing_forward(base_img, impl->second_quadrant);
    impl->cayley_a = base_img;

    NumericalRiemannMap map;
    map.impl_ = impl;
    map.basepoint_ = basepoint;

    // Basepoint derivative of the full composition by the chain rule.
    {
        Complex chain = opening_dforward(basepoint, impl->p0, impl->p1);
        Complex img = opening_forward(basepoint, impl->p0, impl->p1);
        for (const auto& s : impl->steps) {
            chain *= s.dforward(img);
            img = s.forward(img);
        }
        chain *= closing_dforward(img, impl->second_quadrant);
        img = closing_forward(img, impl->second_quadrant);
        // d/dw [(w-a)/(w-conj a)] at w = a is 1/(a - conj a).
        chain /= img - std::conj(img);
        map.deriv_base_ = chain;
    }

    // Certify on a deterministic interior test set around the basepoint.
    // Rings stay within the distance to the nearest data point, so every
    // test point is genuinely interior; an image outside the disk there is
    // an outright failure.
    double reach = 1e300;
    for (const auto& p : pts) reach = std::min(reach, std::abs(p - basepoint));
    double worst = 0.0;
    for (int ring = 1; ring <= 4; ++ring) {
        const double r = reach * 0.2 * ring;
        for (int j = 0; j < 12; ++j) {
            const double ang = 6.283185307179586 * j / 12.0;
            const Complex q = basepoint + r * Complex(std::cos(ang), std::sin(ang));
            if (!point_in_polygon(pts, q)) continue;
            const Complex f = map.forward(q);
            if (!(std::abs(f) < 1.0)) {
                worst = std::max(worst, 1.0);
                continue;
            }
            worst = std::max(worst, std::abs(map.inverse(f) - q));
        }
    }
    map.roundtrip_error_ = worst;
    return map;
}

}  // namespace cle
