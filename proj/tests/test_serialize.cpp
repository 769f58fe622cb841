#include "doctest.h"

#include <sstream>
#include <vector>

#include "cle/serialize.hpp"

using namespace cle;

namespace {

RunConfig demo_config() {
    RunConfig cfg;
    cfg.command = "sample";
    cfg.kappa = 6.0;
    cfg.z = Complex(0.25, -0.5);
    cfg.n = 3;
    cfg.seed = 2024;
    cfg.dt = 1e-4;
    cfg.t_max = 50.0;
    cfg.raster_resolution = 256;
    cfg.threads = 4;
    cfg.out = "out.json";
    return cfg;
}

PocketSample demo_pocket(double r) {
    PocketSample s;
    s.target = Complex(0, 0);
    s.kappa = 6.0;
    s.boundary = {Complex(r, 0), Complex(0, r), Complex(-r, 0), Complex(0, -r), Complex(r, 0)};
    s.diameter = 2 * r;
    s.area = 2 * r * r;
    s.dist = r / 2;
    s.cr_lo = s.dist / 4;
    s.cr_hi = 4 * s.dist;
    s.tau = 1.5;
    s.tau_prime = 0.25;
    s.seed = 7;
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("serialize");

TEST_CASE("run config json carries the format version and parameters") {
    const std::string j = run_config_json(demo_config());
    CHECK(j.find("\"format\":\"cle-carpet/1\"") != std::string::npos);
    CHECK(j.find("\"kappa\":6.0") != std::string::npos);
    CHECK(j.find("\"seed\":2024") != std::string::npos);
    CHECK(j.find("\"command\":\"sample\"") != std::string::npos);
    // Deterministic output for identical configs.
    CHECK(j == run_config_json(demo_config()));
}

TEST_CASE("pocket json document: schema fields and byte determinism") {
    const std::vector<PocketSample> samples{demo_pocket(0.5), demo_pocket(0.25)};
    std::ostringstream a, b;
    write_pockets_json(a, demo_config(), samples);
    write_pockets_json(b, demo_config(), samples);
    CHECK(a.str() == b.str());

    const std::string doc = a.str();
    for (const char* key : {"\"config\"", "\"pockets\"", "\"target\"", "\"boundary\"",
                            "\"diameter\"", "\"area\"", "\"dist\"", "\"cr_lo\"", "\"cr_hi\"",
                            "\"tau\"", "\"tau_prime\"", "\"generation_count\"", "\"censored\""})
        CHECK(doc.find(key) != std::string::npos);
    CHECK(doc.find("cle-carpet/1") != std::string::npos);
}

TEST_CASE("integrand csv: header comment and column layout") {
    IntegrandSample row;
    row.z = Complex(0.5, 0);
    row.n = 10;
    row.censored = 1;
    row.mean = 2.5;
    row.variance = 0.25;
    row.ci95 = {2.0, 3.0};
    std::ostringstream os;
    write_integrand_csv(os, demo_config(), std::vector<IntegrandSample>{row});
    const std::string csv = os.str();
    CHECK(csv.rfind("# {", 0) == 0);
    CHECK(csv.find("z_re,z_im,n,censored,mean,var,ci_lo,ci_hi\n") != std::string::npos);
    CHECK(csv.find("0.5,0,10,1,2.5,0.25,2,3\n") != std::string::npos);
}

TEST_CASE("moments csv: column layout") {
    MomentEstimate row;
    row.lambda = 0.05;
    row.n = 200;
    row.estimate = 1.25;
    row.stability_ratio = 1.01;
    std::ostringstream os;
    write_moments_csv(os, demo_config(), std::vector<MomentEstimate>{row});
    const std::string csv = os.str();
    CHECK(csv.find("lambda,n,estimate,stability_ratio\n") != std::string::npos);
    CHECK(csv.find("0.05,200,1.25,1.01\n") != std::string::npos);
}

TEST_CASE("svg plot: well-formed document with one element per series") {
    std::vector<PlotSeries> series(2);
    series[0].label = "line";
    series[0].x = {0.0, 1.0, 2.0};
    series[0].y = {0.0, 1.0, 0.5};
    series[1].label = "dots";
    series[1].scatter = true;
    series[1].x = {0.5, 1.5};
    series[1].y = {0.2, 0.8};
    const std::string svg = svg_plot("title", "x", "y", series);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find(">line</text>") != std::string::npos);
    CHECK(svg.find(">dots</text>") != std::string::npos);
    CHECK(svg.find("title") != std::string::npos);
}

TEST_SUITE_END();
