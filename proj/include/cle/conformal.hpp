#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace cle {

using Complex = std::complex<double>;

// Automorphism of the unit disk: w -> rotation * (w - a) / (1 - conj(a) w).
struct DiskMobius {
    Complex a{0.0, 0.0};
    Complex rotation{1.0, 0.0};

    Complex operator()(Complex w) const {
        return rotation * (w - a) / (1.0 - std::conj(a) * w);
    }
    Complex derivative(Complex w) const {
        const Complex d = 1.0 - std::conj(a) * w;
        return rotation * (1.0 - std::norm(a)) / (d * d);
    }
    DiskMobius inverse() const;
};

// The disk automorphism sending z to 0 and fixing -i.  |phi'(z)| = 1/(1-|z|^2).
DiskMobius mobius_to_origin(Complex z);

// Koebe 1/4-to-4 bracket between conformal radius and boundary distance:
// cr/4 <= dist <= 4*cr.
bool koebe_sandwich_check(double cr, double dist);

// Checks the two Mobius distortion chains for the map phi = mobius_to_origin(z)
// and its inverse psi on a pair of points in B(z, r).  Requires B(z,2r)
// inside the unit disk.  Throws std::domain_error on precondition violation.
bool distortion_bounds_check(Complex z, double r, Complex u1, Complex u2);

// Numerical Riemann map of a polyline-bounded Jordan domain onto the unit
// disk with basepoint -> 0, built with the geodesic variant of the zipper
// algorithm.  Accuracy is certified per call: `roundtrip_error` is the max of
// |inverse(forward(p)) - p| over a deterministic interior test set.
class NumericalRiemannMap {
  public:
    Complex forward(Complex z) const;   // domain -> disk
    Complex inverse(Complex w) const;   // disk -> domain
    Complex derivative_at_basepoint() const { return deriv_base_; }
    double conformal_radius() const { return 1.0 / std::abs(deriv_base_); }
    Complex basepoint() const { return basepoint_; }
    double roundtrip_error() const { return roundtrip_error_; }

  private:
    friend NumericalRiemannMap riemann_map_zipper(std::span<const Complex>, Complex, int);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    Complex basepoint_{};
    Complex deriv_base_{};
    double roundtrip_error_ = 0.0;
};

// Builds the zipper map for a closed simple polyline with the given interior
// basepoint.  `resample`, when positive, resamples the boundary to roughly
// that many equally spaced data points before unzipping.  Throws
// std::domain_error when the basepoint is outside and std::invalid_argument
// for degenerate boundaries.
NumericalRiemannMap riemann_map_zipper(std::span<const Complex> boundary, Complex basepoint,
                                       int resample = 0);

}  // namespace cle
