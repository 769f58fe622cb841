#include "doctest.h"

#include <cmath>
#include <vector>

#include "cle/stats.hpp"

using namespace cle;

TEST_SUITE_BEGIN("stats");

TEST_CASE("lambda0: closed values and the positivity window") {
    CHECK(lambda0(6.0) == doctest::Approx(1.0 - 2.0 / 6.0 - 18.0 / 32.0).epsilon(1e-14));
    CHECK(std::abs(lambda0(6.0) - 0.10416666666666666) < 1e-12);
    CHECK(std::abs(lambda0(8.0 / 3.0)) < 1e-12);
    CHECK(std::abs(lambda0(8.0)) < 1e-12);
    for (double k : {3.0, 4.0, 5.0, 7.0}) CHECK(lambda0(k) > 0.0);
    CHECK(lambda0(2.0) < 0.0);
    CHECK(lambda0(10.0) < 0.0);
}

TEST_CASE("negative moment: exact cases and input validation") {
    const std::vector<double> twos(100, 2.0);
    const MomentEstimate m0 = negative_moment(twos, 0.0);
    CHECK(m0.estimate == doctest::Approx(1.0).epsilon(1e-14));
    const MomentEstimate m1 = negative_moment(twos, 1.0);
    CHECK(m1.estimate == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m1.stability_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m1.n == 100);

    const std::vector<double> bad{1.0, 0.0, 2.0};
    CHECK_THROWS_AS(negative_moment(bad, 0.5), std::invalid_argument);
}

TEST_CASE("partial sums: geometric series and monotonicity") {
    std::vector<double> diams;
    for (int k = 0; k <= 10; ++k) diams.push_back(std::pow(2.0, -k));
    const PartialSums ps = partial_sums(diams);
    REQUIRE(ps.sums.size() == diams.size());
    CHECK(ps.sums.back() ==
          doctest::Approx((4.0 / 3.0) * (1.0 - std::pow(0.25, 11))).epsilon(1e-12));
    for (std::size_t i = 1; i < ps.sums.size(); ++i) CHECK(ps.sums[i] >= ps.sums[i - 1]);
    CHECK(ps.plateau >= 0.0);
    CHECK(ps.plateau < 1.0);

    const PartialSums one = partial_sums(std::vector<double>{3.0});
    CHECK(one.sums.size() == 1);
    CHECK(one.sums[0] == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("ratio bound: arithmetic identity on and off the qualifying subset") {
    // On the subset (area large enough for the diameter) the bound is a
    // theorem; off it the predicate reports not-applicable as true.
    for (double xi : {1.1, 1.25})
        for (double eps : {0.1, 0.05})
            for (double diam : {1e-4, 1e-2, 0.05, 0.2, 1.0}) {
                const double thresh =
                    diam <= eps ? std::pow(diam, 2 * xi) : std::pow(eps, 2 * xi);
                // Just-qualifying area: tightest case of the bound.
                CHECK(ratio_bound_holds(diam, thresh, xi, eps));
                CHECK(ratio_bound_holds(diam, 10.0 * thresh, xi, eps));
                // Below the threshold the sample is outside the subset.
                CHECK(ratio_bound_holds(diam, 0.5 * thresh, xi, eps));
            }
    CHECK_THROWS_AS(ratio_bound_holds(1.0, 1.0, 0.9, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ratio_bound_holds(-1.0, 1.0, 1.1, 0.1), std::invalid_argument);
}

TEST_CASE("disk integral: area, integrable blow-up, divergence detector") {
    const IntegralEstimate unit = disk_integral([](Complex) { return 1.0; }, 16, 4000, 5);
    CHECK_FALSE(unit.divergent);
    CHECK(unit.value == doctest::Approx(M_PI).epsilon(0.01));
    CHECK(unit.ci_lo <= unit.value);
    CHECK(unit.ci_hi >= unit.value);

    const IntegralEstimate half = disk_integral(
        [](Complex z) { return 1.0 / std::sqrt(1.0 - std::abs(z)); }, 24, 4000, 7);
    CHECK_FALSE(half.divergent);
    CHECK(half.value == doctest::Approx(8.0 * M_PI / 3.0).epsilon(0.02));

    const IntegralEstimate crit =
        disk_integral([](Complex z) { return 1.0 / (1.0 - std::abs(z)); }, 24, 2000, 9);
    CHECK(crit.divergent);
}

TEST_CASE("boundary blow-up fit: exact power laws") {
    auto synthetic = [](double alpha) {
        std::vector<IntegrandSample> rows;
        for (double rho : {0.0, 0.5, 0.75, 0.875, 0.9375}) {
            IntegrandSample s;
            s.z = Complex(rho, 0);
            s.n = 100;
            s.mean = std::pow(1.0 - rho, -alpha);
            s.variance = 0.0;
            rows.push_back(s);
        }
        return rows;
    };
    const auto rows_half = synthetic(0.5);
    const BlowupFit f = boundary_blowup_fit(rows_half);
    CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(f.alpha_ci_lo <= f.alpha);
    CHECK(f.alpha_ci_hi >= f.alpha);

    const auto rows_flat = synthetic(0.0);
    CHECK(std::abs(boundary_blowup_fit(rows_flat).alpha) < 1e-6);

    std::vector<IntegrandSample> degenerate(rows_half.begin(), rows_half.begin() + 2);
    CHECK_THROWS_AS(boundary_blowup_fit(degenerate), std::invalid_argument);
}

TEST_CASE("radial profile integral: constant profile reproduces the disk area") {
    std::vector<IntegrandSample> rows;
    for (double rho : {0.0, 0.5, 0.75, 0.875}) {
        IntegrandSample s;
        s.z = Complex(rho, 0);
        s.n = 10;
        s.mean = 1.0;
        rows.push_back(s);
    }
    const BlowupFit fit = boundary_blowup_fit(rows);
    const IntegralEstimate est = radial_profile_integral(rows, fit);
    CHECK_FALSE(est.divergent);
    CHECK(est.value == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("integrand reduction: synthetic disk pockets give 4/pi") {
    std::vector<PocketSample> samples(12);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = 0.1 + 0.05 * static_cast<double>(i);
        samples[i].diameter = 2.0 * r;
        samples[i].area = M_PI * r * r;
    }
    const IntegrandSample s = integrand_from_samples(Complex(0, 0), samples);
    CHECK(s.n == samples.size());
    CHECK(s.censored == 0);
    CHECK(s.mean == doctest::Approx(4.0 / M_PI).epsilon(1e-12));
    CHECK(s.ci95.first <= s.mean);
    CHECK(s.ci95.second >= s.mean);
    CHECK_FALSE(s.biased);

    // Censored samples are excluded but counted; >5% marks bias.
    samples[0].censored = true;
    const IntegrandSample c = integrand_from_samples(Complex(0, 0), samples);
    CHECK(c.n == samples.size() - 1);
    CHECK(c.censored == 1);
    CHECK(c.biased);
}

TEST_SUITE_END();
