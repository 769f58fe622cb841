#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cle/sampler.hpp"
#include "cle/stats.hpp"

namespace cle {

inline constexpr const char* kFormatVersion = "cle-carpet/1";

// Provenance block written into every output file.
struct RunConfig {
    std::string command;
    double kappa = 0.0;
    Complex z{};
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double t_max = 0.0;
    int raster_resolution = 0;
    int threads = 0;
    std::string format = "json";
    std::string out;
    bool plot = false;
};

std::string run_config_json(const RunConfig& cfg);

// Pocket records: {"format":…, "config":…, "pockets":[…]}.
void write_pockets_json(std::ostream& os, const RunConfig& cfg,
                        std::span<const PocketSample> samples);

// CSV with a commented JSON header line; columns
// z_re,z_im,n,censored,mean,var,ci_lo,ci_hi.
void write_integrand_csv(std::ostream& os, const RunConfig& cfg,
                         std::span<const IntegrandSample> rows);

// Columns lambda,n,estimate,stability_ratio.
void write_moments_csv(std::ostream& os, const RunConfig& cfg,
                       std::span<const MomentEstimate> rows);

// Minimal line/scatter SVG: one polyline per series over shared axes.
struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    bool scatter = false;
};
std::string svg_plot(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, std::span<const PlotSeries> series);

}  // namespace cle
