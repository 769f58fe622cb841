#include "doctest.h"

#include <cmath>
#include <vector>

#include "cle/conformal.hpp"
#include "cle/rng.hpp"

using namespace cle;

namespace {

std::vector<Complex> circle_polyline(Complex center, double radius, int n) {
    std::vector<Complex> p;
    p.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * M_PI * k / n;
        p.push_back(center + radius * Complex(std::cos(a), std::sin(a)));
    }
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("conformal");

TEST_CASE("mobius to origin: fixed points and derivative") {
    const DiskMobius id = mobius_to_origin(Complex(0, 0));
    CHECK(std::abs(id.a) == 0.0);
    CHECK(std::abs(id.rotation - Complex(1, 0)) < 1e-12);

    const DiskMobius m = mobius_to_origin(Complex(0.5, 0));
    CHECK(std::abs(m(Complex(0.5, 0))) == 0.0);
    CHECK(std::abs(m(Complex(0, -1)) - Complex(0, -1)) < 1e-12);
    // |phi'(z)| = 1/(1-|z|^2) = 4/3 at z = 0.5; cross-check the analytic
    // derivative against a centered finite difference.
    CHECK(std::abs(m.derivative(Complex(0.5, 0))) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    const double h = 1e-6;
    const double fd = std::abs(m(Complex(0.5 + h, 0)) - m(Complex(0.5 - h, 0))) / (2 * h);
    CHECK(fd == doctest::Approx(4.0 / 3.0).epsilon(1e-6));

    CHECK_THROWS_AS(mobius_to_origin(Complex(1.0, 0)), std::domain_error);
}

TEST_CASE("mobius group law: inverse composition is the identity") {
    RngStream rng(13, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const Complex z(0.4 * rng.uniform() - 0.2 + 0.5 * rng.uniform(),
                        0.8 * rng.uniform() - 0.4);
        if (std::abs(z) >= 0.95) continue;
        const DiskMobius m = mobius_to_origin(z);
        const DiskMobius inv = m.inverse();
        for (int i = 0; i < 100; ++i) {
            const double r = 0.97 * std::sqrt(rng.uniform());
            const double a = 2.0 * M_PI * rng.uniform();
            const Complex w = r * Complex(std::cos(a), std::sin(a));
            CHECK(std::abs(inv(m(w)) - w) < 1e-12);
            CHECK(std::abs(m(w)) < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("koebe sandwich bracket") {
    CHECK(koebe_sandwich_check(1.0, 0.3));
    CHECK_FALSE(koebe_sandwich_check(1.0, 0.2));
    CHECK_FALSE(koebe_sandwich_check(1.0, 4.5));
    CHECK_THROWS_AS(koebe_sandwich_check(0.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(koebe_sandwich_check(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("distortion bounds: identity-like case and dense grid") {
    CHECK(distortion_bounds_check(Complex(0, 0), 0.4, Complex(0.1, 0), Complex(0.2, 0)));

    const Complex z(0.3, 0);
    const double r = 0.2;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const Complex u1 = z + Complex((i - 4.5) / 10.0, (j - 4.5) / 10.0) * (r / 0.8);
            const Complex u2 = z + Complex((j - 4.5) / 10.0, (i - 4.5) / 10.0) * (r / 0.8);
            CHECK(distortion_bounds_check(z, r, u1, u2));
        }

    CHECK_THROWS_AS(distortion_bounds_check(Complex(0.3, 0), 0.4, Complex(0.3, 0), Complex(0.3, 0)),
                    std::domain_error);
    CHECK_THROWS_AS(distortion_bounds_check(Complex(0.3, 0), 0.2, Complex(0.8, 0), Complex(0.3, 0)),
                    std::domain_error);
}

TEST_CASE("distortion chain: the 4/r bound never beats 4/(1-|z|^2) when r fits") {
    for (double az : {0.0, 0.3, 0.6}) {
        const double s = 1.0 - az * az;
        for (double r : {0.1 * s, 0.5 * s, s}) CHECK(4.0 / s <= 4.0 / r + 1e-15);
    }
}

TEST_CASE("zipper map: disk oracle, scaling, and certification") {
    const auto circ = circle_polyline(Complex(0, 0), 1.0, 512);
    const NumericalRiemannMap m = riemann_map_zipper(circ, Complex(0, 0));
    CHECK(m.conformal_radius() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m.roundtrip_error() < 1e-6);
    CHECK(std::abs(m.forward(Complex(0, 0))) < 1e-9);

    const auto big = circle_polyline(Complex(0, 0), 2.0, 512);
    const NumericalRiemannMap m2 = riemann_map_zipper(big, Complex(0, 0));
    CHECK(m2.conformal_radius() == doctest::Approx(2.0).epsilon(0.01));

    CHECK_THROWS_AS(riemann_map_zipper(circ, Complex(2.0, 0)), std::domain_error);
    CHECK_THROWS_AS(riemann_map_zipper(std::vector<Complex>{Complex(0, 0), Complex(1, 0)},
                                       Complex(0.5, 0.1)),
                    std::invalid_argument);
}

TEST_CASE("zipper map: offset basepoint reproduces the mobius conformal radius") {
    // CR(a, D) = 1 - |a|^2 for the unit disk.
    const auto circ = circle_polyline(Complex(0, 0), 1.0, 512);
    const NumericalRiemannMap m = riemann_map_zipper(circ, Complex(0.5, 0));
    CHECK(m.conformal_radius() == doctest::Approx(0.75).epsilon(0.015));
    CHECK(m.roundtrip_error() < 1e-6);
}

TEST_CASE("zipper map: koebe sandwich holds for assorted shapes") {
    std::vector<std::vector<Complex>> shapes;
    shapes.push_back(circle_polyline(Complex(0.2, 0.1), 0.7, 256));
    shapes.push_back({Complex(0, 0), Complex(1, 0), Complex(1, 1), Complex(0, 1)});
    {
        std::vector<Complex> ellipse;
        for (int k = 0; k < 256; ++k) {
            const double a = 2.0 * M_PI * k / 256;
            ellipse.emplace_back(2.0 * std::cos(a), 0.8 * std::sin(a));
        }
        shapes.push_back(ellipse);
    }
    for (const auto& shape : shapes) {
        Complex c(0, 0);
        for (const auto& v : shape) c += v;
        c /= static_cast<double>(shape.size());
        const NumericalRiemannMap m = riemann_map_zipper(shape, c, 256);
        double dist = 1e300;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            const Complex a = shape[i], b = shape[(i + 1) % shape.size()];
            for (double t : {0.0, 0.25, 0.5, 0.75})
                dist = std::min(dist, std::abs(c - (a + t * (b - a))));
        }
        CHECK(m.roundtrip_error() < 1e-6);
        CHECK(koebe_sandwich_check(m.conformal_radius(), dist));
    }
}

TEST_CASE("zipper map: forward/inverse agree away from the basepoint") {
    const auto circ = circle_polyline(Complex(0, 0), 1.0, 512);
    const NumericalRiemannMap m = riemann_map_zipper(circ, Complex(0, 0));
    for (Complex z : {Complex(0.3, 0.4), Complex(-0.6, 0.1), Complex(0.05, -0.7)}) {
        const Complex w = m.forward(z);
        CHECK(std::abs(w) < 1.0);
        CHECK(std::abs(m.inverse(w) - z) < 1e-6);
    }
}

TEST_SUITE_END();
