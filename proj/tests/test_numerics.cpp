#include "doctest.h"

#include <cmath>
#include <vector>

#include "cle/grid.hpp"
#include "cle/rng.hpp"
#include "cle/sde.hpp"

using namespace cle;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("time grid reconstructs times multiplicatively") {
    TimeGrid g(0.25, 1e-3, 1000);
    for (std::size_t k : {std::size_t(0), std::size_t(1), std::size_t(777), std::size_t(1000)})
        CHECK(g.time(k) == 0.25 + static_cast<double>(k) * 1e-3);
    CHECK(g.horizon() == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(g.points() == 1001);
    CHECK(g.index_at(0.0) == 0);
    CHECK(g.index_at(0.25) == 0);
    CHECK(g.index_at(0.7504) == 500);
    CHECK(g.index_at(99.0) == 1000);
    CHECK_THROWS_AS(TimeGrid(0.0, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(0.0, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("scalar path length must match its grid") {
    TimeGrid g(0.0, 0.1, 4);
    CHECK_NOTHROW(ScalarPath(g, std::vector<double>(5, 1.0)));
    CHECK_THROWS_AS(ScalarPath(g, std::vector<double>(4, 1.0)), std::invalid_argument);
}

TEST_CASE("rng streams replay and separate") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool same = true, diff = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        same = same && (x == b.next_u64());
        diff = diff || (x != c.next_u64());
    }
    CHECK(same);
    CHECK(diff);
}

TEST_CASE("rng uniform lands in the open interval, gaussian has unit moments") {
    RngStream r(1, 0);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        const double g = r.gaussian();
        sum += g;
        sumsq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("euler-maruyama: zero dynamics keeps the path constant") {
    TimeGrid g(0.0, 0.1, 10);
    RngStream r(5, 0);
    auto p = integrate_euler_maruyama([](double, double) { return 0.0; },
                                      [](double, double) { return 0.0; }, 1.0, g, r);
    for (double v : p.values) CHECK(v == 1.0);
}

TEST_CASE("euler-maruyama: unit drift integrates the identity") {
    TimeGrid g(0.0, 0.1, 10);
    RngStream r(5, 0);
    auto p = integrate_euler_maruyama([](double, double) { return 1.0; },
                                      [](double, double) { return 0.0; }, 0.0, g, r);
    for (std::size_t k = 0; k <= 10; ++k)
        CHECK(p.values[k] == doctest::Approx(0.1 * static_cast<double>(k)).epsilon(1e-12));
}

TEST_CASE("euler-maruyama: brownian endpoint variance matches t") {
    TimeGrid g(0.0, 0.01, 100);
    double sum = 0.0, sumsq = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        RngStream r(99, static_cast<std::uint64_t>(i));
        const double x = integrate_euler_maruyama([](double, double) { return 0.0; },
                                                  [](double, double) { return 1.0; }, 0.0, g, r)
                             .back();
        sum += x;
        sumsq += x * x;
    }
    const double var = sumsq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("euler-maruyama: floor mirrors instead of sticking") {
    TimeGrid g(0.0, 0.01, 200);
    RngStream r(17, 3);
    auto p = integrate_euler_maruyama([](double, double) { return -1.0; },
                                      [](double, double) { return 1.0; }, 0.5, g, r, 0.0);
    int at_floor = 0;
    for (double v : p.values) {
        CHECK(v >= 0.0);
        at_floor += v == 0.0;
    }
    CHECK(at_floor <= 1);  // mirroring almost never lands exactly on the floor
    RngStream r2(17, 3);
    CHECK_THROWS_AS(integrate_euler_maruyama([](double, double) { return 0.0; },
                                             [](double, double) { return 0.0; }, -1.0, g, r2, 0.0),
                    std::invalid_argument);
}

TEST_CASE("euler-maruyama: non-finite dynamics reports the step") {
    TimeGrid g(0.0, 0.1, 10);
    RngStream r(5, 0);
    CHECK_THROWS_WITH_AS(
        integrate_euler_maruyama([](double t, double) { return t > 0.45 ? 1.0 / 0.0 : 0.0; },
                                 [](double, double) { return 0.0; }, 0.0, g, r),
        doctest::Contains("step 5"), std::runtime_error);
}

TEST_CASE("squared bessel: parameter validation and initial condition") {
    TimeGrid g(0.0, 0.1, 10);
    RngStream r(2, 0);
    CHECK_THROWS_AS(sample_squared_bessel(1.2, 0.0, g, r), std::invalid_argument);
    CHECK_THROWS_AS(sample_squared_bessel(0.5, -1.0, g, r), std::invalid_argument);
    auto p = sample_squared_bessel(1.0 / 3.0, 4.0, g, r);
    CHECK(p.front() == 4.0);
    for (double v : p.values) CHECK(v >= 0.0);
}

TEST_CASE("squared bessel: mean endpoint tracks z0 + delta t") {
    // The transition sampling is exact, so a coarse grid carries no bias.
    TimeGrid g(0.0, 0.01, 100);
    const double delta = 1.0 / 3.0;
    double sum = 0.0, sumsq = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        RngStream r(31, static_cast<std::uint64_t>(i));
        const double z = sample_squared_bessel(delta, 0.0, g, r).back();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - delta) <= 3.0 * se);
}

TEST_CASE("squared bessel: boundary occupation does not grow under refinement") {
    // The exact transition law is continuous, so exact zeros after t=0 have
    // probability zero at every step size.
    auto zero_fraction = [](double dt, std::size_t n) {
        TimeGrid g(0.0, dt, n);
        int zeros = 0, total = 0;
        for (int i = 0; i < 50; ++i) {
            RngStream r(77, static_cast<std::uint64_t>(i));
            auto p = sample_squared_bessel(0.9, 0.0, g, r);
            for (std::size_t k = 1; k < p.values.size(); ++k) {
                zeros += p.values[k] == 0.0;
                ++total;
            }
        }
        return static_cast<double>(zeros) / total;
    };
    const double coarse = zero_fraction(1e-2, 100);
    const double fine = zero_fraction(5e-3, 200);
    CHECK(fine <= coarse + 1e-12);
    CHECK(coarse == 0.0);
}

TEST_CASE("pv integral: constant path reduces to a plain integral") {
    TimeGrid g(0.0, 1e-3, 1000);
    std::vector<double> v(g.points(), 2.0);
    auto i = principal_value_integral(ScalarPath(g, v), 1e-4);
    CHECK(i.front() == 0.0);
    CHECK(i.back() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(principal_value_integral(ScalarPath(g, v), 0.0), std::invalid_argument);
    v[3] = -1.0;
    CHECK_THROWS_AS(principal_value_integral(ScalarPath(g, v), 1e-4), std::invalid_argument);
}

TEST_CASE("pv integral: capped-kernel estimates are cauchy under eps halving") {
    // x = sqrt(|t - 1/2|) has an integrable 1/x singularity; the capped
    // kernel's error there is ~eps, so successive eps-halving differences
    // shrink by about two.
    TimeGrid g(0.0, 1e-6, 1000000);
    std::vector<double> v(g.points());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sqrt(std::abs(g.time(k) - 0.5));
    ScalarPath x(g, std::move(v));
    std::vector<double> ends;
    for (int p = 3; p <= 8; ++p) ends.push_back(principal_value_integral(x, std::pow(2.0, -p)).back());
    double prev = std::abs(ends[1] - ends[0]);
    for (std::size_t k = 2; k < ends.size(); ++k) {
        const double diff = std::abs(ends[k] - ends[k - 1]);
        CHECK(diff <= 0.75 * prev);
        prev = diff;
    }
}

TEST_SUITE_END();
