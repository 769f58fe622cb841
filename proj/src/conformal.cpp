#include "cle/conformal.hpp"

#include <cmath>
#include <stdexcept>

namespace cle {

DiskMobius DiskMobius::inverse() const {
    // w -> r (w-a)/(1-conj(a)w) inverts to v -> (v/r + a)/(1 + conj(a) v/r),
    // which is again of the same form with a' = -r*a, rotation' = 1/r... the
    // closed form below is easiest to verify by composing.
    DiskMobius inv;
    inv.a = -rotation * a;
    inv.rotation = std::conj(rotation) / std::norm(rotation);
    return inv;
}

DiskMobius mobius_to_origin(Complex z) {
    if (!(std::abs(z) < 1.0)) throw std::domain_error("mobius_to_origin: |z| must be < 1");
    DiskMobius m;
    m.a = z;
    const Complex mi = (Complex(0, -1) - z) / (1.0 - std::conj(z) * Complex(0, -1));
    m.rotation = Complex(0, -1) / mi;  // unit modulus: |mi| = 1 on the circle
    return m;
}

bool koebe_sandwich_check(double cr, double dist) {
    if (!(cr > 0.0) || !(dist > 0.0))
        throw std::invalid_argument("koebe_sandwich_check: inputs must be positive");
    return cr / 4.0 <= dist && dist <= 4.0 * cr;
}

bool distortion_bounds_check(Complex z, double r, Complex u1, Complex u2) {
    if (!(r > 0.0) || std::abs(z) + 2.0 * r > 1.0)
        throw std::domain_error("distortion_bounds_check: B(z,2r) must lie in the unit disk");
    if (std::abs(u1 - z) > r || std::abs(u2 - z) > r)
        throw std::domain_error("distortion_bounds_check: pair must lie in B(z,r)");
    const DiskMobius phi = mobius_to_origin(z);
    const DiskMobius psi = phi.inverse();
    const double s = 1.0 - std::norm(z);
    const Complex v1 = phi(u1), v2 = phi(u2);
    const double du = std::abs(u2 - u1);
    const double dv = std::abs(v2 - v1);
    const double tol = 1e-12;
    // phi direction: |u|/4s <= |phi(u2)-phi(u1)| <= 4|u|/s <= 4|u|/r.
    if (dv + tol < du / (4.0 * s)) return false;
    if (dv > 4.0 * du / s + tol) return false;
    if (4.0 * du / s > 4.0 * du / r + tol) return false;
    // psi direction on the images (which land in B(0,1/2)):
    // s/4 |v| <= |psi(v2)-psi(v1)| <= 4 s |v|.
    const double dpsi = std::abs(psi(v2) - psi(v1));
    if (dpsi + tol < 0.25 * s * dv) return false;
    if (dpsi > 4.0 * s * dv + tol) return false;
    return true;
}

}  // namespace cle
