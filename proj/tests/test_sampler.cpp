#include "doctest.h"

#include <cmath>
#include <vector>

#include "cle/sampler.hpp"
#include "cle/geometry.hpp"

using namespace cle;

namespace {

DrivingPath flat_driving(std::size_t n, double dt) {
    DrivingPath d;
    d.grid = TimeGrid(0.0, dt, n);
    d.w.assign(n + 1, 0.0);
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("sampler");

TEST_CASE("classify_disconnection: interval membership and the trunk default") {
    const DrivingPath d = flat_driving(1000, 1e-3);
    std::vector<ExcursionInterval> exc(2);
    exc[0] = {0.1, 0.15, 0.3, 1.0};
    exc[1] = {0.5, 0.55, 0.8, 1.0};

    SwallowReport sw;
    sw.swallowed = true;

    sw.tau = 0.2;
    CHECK_FALSE(classify_disconnection(d, exc, sw).trunk);
    CHECK(classify_disconnection(d, exc, sw).excursion == 0);

    sw.tau = 0.65;
    CHECK(classify_disconnection(d, exc, sw).excursion == 1);

    sw.tau = 0.4;  // between excursions: trunk
    CHECK(classify_disconnection(d, exc, sw).trunk);

    sw.tau = 0.9;  // after the last excursion
    CHECK(classify_disconnection(d, exc, sw).trunk);

    // The closing zero beta is a grid knot; half a step of slack keeps it in.
    sw.tau = 0.3 + 0.4e-3;
    CHECK_FALSE(classify_disconnection(d, exc, sw).trunk);

    sw.swallowed = false;
    CHECK_THROWS_AS(classify_disconnection(d, exc, sw), std::invalid_argument);
}

TEST_CASE("classify_disconnection: random instances match a brute scan") {
    RngStream rng(77, 0);
    const DrivingPath d = flat_driving(100, 1e-2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ExcursionInterval> exc;
        double t = 0.0;
        while (t < 0.9) {
            ExcursionInterval e;
            e.alpha = t + 0.02 * rng.uniform();
            e.beta = e.alpha + 0.02 + 0.1 * rng.uniform();
            e.sigma = 0.5 * (e.alpha + e.beta);
            e.peak = 1.0;
            exc.push_back(e);
            t = e.beta + 0.02 * rng.uniform();
        }
        SwallowReport sw;
        sw.swallowed = true;
        sw.tau = rng.uniform();
        const Disconnection got = classify_disconnection(d, exc, sw);
        // Brute interval scan with the same half-step tolerance.
        bool found = false;
        for (std::size_t m = 0; m < exc.size(); ++m)
            if (sw.tau > exc[m].alpha && sw.tau < exc[m].beta + 0.5 * d.grid.dt) {
                CHECK_FALSE(got.trunk);
                CHECK(got.excursion == m);
                found = true;
                break;
            }
        if (!found) CHECK(got.trunk);
    }
}

TEST_CASE("gasket sampler: preconditions") {
    const Params p = Params::make(6.0, 1e-3, 10.0, 1);
    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_pocket_gasket(Complex(1.5, 0), p, rng), std::domain_error);
    const Params bad = Params::make(3.0, 1e-3, 10.0, 1);
    CHECK_THROWS_AS(sample_pocket_gasket(Complex(0, 0), bad, rng), std::invalid_argument);
}

TEST_CASE("carpet sampler: preconditions") {
    const Params p = Params::make(3.0, 1e-3, 10.0, 1);
    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_loop_carpet(Complex(-1.5, 0), p, rng), std::domain_error);
    const Params bad = Params::make(6.0, 1e-3, 10.0, 1);
    CHECK_THROWS_AS(sample_loop_carpet(Complex(0, 0), bad, rng), std::invalid_argument);
}

TEST_CASE("gasket sampler: invariants of a usable sample") {
    const Params p = Params::make(6.0, 5e-4, 30.0, 314);
    PocketSample s;
    bool got = false;
    for (std::uint64_t stream = 0; stream < 8 && !got; ++stream) {
        RngStream rng(p.seed, stream);
        s = sample_pocket_gasket(Complex(0, 0), p, rng);
        got = s.usable();
    }
    REQUIRE(got);

    // Stopping-time definitions within grid tolerance.
    CHECK(s.tau > s.tau_prime);
    CHECK(s.tau_prime >= 0.0);
    CHECK(std::abs(s.theta_at_tau) < 0.5);
    CHECK(std::abs(s.theta_at_tau_prime - 2.0 * M_PI) < 0.5);

    // Clockwise loop around the target, measured region containing it.
    CHECK(s.winding == -1);
    REQUIRE_FALSE(s.region.empty());
    const Complex rel = (s.target - s.region.origin) / s.region.cell_size;
    CHECK(s.region.filled(static_cast<int>(rel.real()), static_cast<int>(rel.imag())));

    CHECK(s.dist > 0.0);
    CHECK(s.dist <= s.diameter);
    CHECK(s.area <= 0.25 * M_PI * s.diameter * s.diameter * 1.05);
    CHECK(s.cr_lo == doctest::Approx(s.dist / 4).epsilon(1e-12));
    CHECK(s.cr_hi == doctest::Approx(4 * s.dist).epsilon(1e-12));

    // Region and boundary stay inside the unit disk.
    for (int j = 0; j < s.region.ny; ++j)
        for (int i = 0; i < s.region.nx; ++i)
            if (s.region.filled(i, j)) CHECK(std::abs(s.region.center(i, j)) < 1.0);
    for (const auto& v : s.boundary) CHECK(std::abs(v) < 1.0 + 1e-9);
}

TEST_CASE("carpet sampler: invariants of a usable loop") {
    const Params p = Params::make(3.0, 1e-3, 30.0, 2718);
    PocketSample s;
    bool got = false;
    for (std::uint64_t stream = 0; stream < 6 && !got; ++stream) {
        RngStream rng(p.seed, stream);
        s = sample_loop_carpet(Complex(0, 0), p, rng);
        got = s.usable();
    }
    REQUIRE(got);

    CHECK(std::abs(s.winding) == 1);
    CHECK(self_intersections(s.boundary) == 0);
    // Swallow time lies inside the excursion that produced the loop.
    CHECK(s.tau > s.tau_prime);
    CHECK(s.generation_count >= 0);
    REQUIRE_FALSE(s.region.empty());
    CHECK(s.dist > 0.0);
    CHECK(s.dist <= s.diameter);
    CHECK(s.area <= 0.25 * M_PI * s.diameter * s.diameter * 1.05);
}

TEST_CASE("ensemble: deterministic per-stream replay and thread independence") {
    const Params p = Params::make(6.0, 1e-3, 20.0, 99);
    const auto serial = sample_ensemble(Complex(0, 0), p, 4, 0, false);
    const auto parallel = sample_ensemble(Complex(0, 0), p, 4, 0, true);
    REQUIRE(serial.size() == 4);
    REQUIRE(parallel.size() == 4);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].censored == parallel[i].censored);
        CHECK(serial[i].flagged == parallel[i].flagged);
        CHECK(serial[i].tau == parallel[i].tau);
        CHECK(serial[i].diameter == parallel[i].diameter);
        CHECK(serial[i].boundary == parallel[i].boundary);
    }
    // Stream offset: sample i of a shifted ensemble replays sample i+offset.
    const auto shifted = sample_ensemble(Complex(0, 0), p, 2, 2, false);
    CHECK(shifted[0].tau == serial[2].tau);
    CHECK(shifted[1].boundary == serial[3].boundary);
}

TEST_CASE("zipper conformal radius agrees with Koebe on a synthetic disk pocket") {
    PocketSample s;
    s.target = Complex(0, 0);
    const int n = 256;
    for (int k = 0; k <= n; ++k) {
        const double a = 2.0 * M_PI * k / n;
        s.boundary.push_back(0.5 * Complex(std::cos(a), std::sin(a)));
    }
    s.region = enclosed_component(s.boundary, s.target, 256);
    s.dist = distance_to_boundary(s.region, s.target);
    const double cr = pocket_zipper_cr(s);
    CHECK(cr == doctest::Approx(0.5).epsilon(0.02));
    CHECK(s.cr_zipper == cr);
    CHECK(koebe_sandwich_check(cr, s.dist));
}

TEST_SUITE_END();
