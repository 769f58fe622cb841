#include "cle/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace cle {
namespace {

using nlohmann::json;

// Shortest round-trip formatting; identical input bits give identical text.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json config_to_json(const RunConfig& cfg) {
    return json{{"format", kFormatVersion},
                {"command", cfg.command},
                {"kappa", cfg.kappa},
                {"z", {cfg.z.real(), cfg.z.imag()}},
                {"n", cfg.n},
                {"seed", cfg.seed},
                {"dt", cfg.dt},
                {"t_max", cfg.t_max},
                {"raster_resolution", cfg.raster_resolution},
                {"threads", cfg.threads},
                {"out", cfg.out},
                {"plot", cfg.plot}};
}

json pocket_to_json(const PocketSample& s) {
    json boundary = json::array();
    for (const auto& v : s.boundary) boundary.push_back({v.real(), v.imag()});
    return json{{"target", {s.target.real(), s.target.imag()}},
                {"kappa", s.kappa},
                {"boundary", std::move(boundary)},
                {"diameter", s.diameter},
                {"area", s.area},
                {"dist", s.dist},
                {"cr_lo", s.cr_lo},
                {"cr_hi", s.cr_hi},
                {"tau", s.tau},
                {"tau_prime", s.tau_prime},
                {"seed", s.seed},
                {"generation_count", s.generation_count},
                {"censored", s.censored}};
}

}  // namespace

std::string run_config_json(const RunConfig& cfg) { return config_to_json(cfg).dump(); }

void write_pockets_json(std::ostream& os, const RunConfig& cfg,
                        std::span<const PocketSample> samples) {
    json doc;
    doc["config"] = config_to_json(cfg);
    json arr = json::array();
    for (const auto& s : samples) arr.push_back(pocket_to_json(s));
    doc["pockets"] = std::move(arr);
    os << doc.dump(2) << '\n';
}

void write_integrand_csv(std::ostream& os, const RunConfig& cfg,
                         std::span<const IntegrandSample> rows) {
    os << "# " << run_config_json(cfg) << '\n';
    os << "z_re,z_im,n,censored,mean,var,ci_lo,ci_hi\n";
    for (const auto& r : rows)
        os << fmt(r.z.real()) << ',' << fmt(r.z.imag()) << ',' << r.n << ',' << r.censored
           << ',' << fmt(r.mean) << ',' << fmt(r.variance) << ',' << fmt(r.ci95.first) << ','
           << fmt(r.ci95.second) << '\n';
}

void write_moments_csv(std::ostream& os, const RunConfig& cfg,
                       std::span<const MomentEstimate> rows) {
    os << "# " << run_config_json(cfg) << '\n';
    os << "lambda,n,estimate,stability_ratio\n";
    for (const auto& r : rows)
        os << fmt(r.lambda) << ',' << r.n << ',' << fmt(r.estimate) << ','
           << fmt(r.stability_ratio) << '\n';
}

std::string svg_plot(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, std::span<const PlotSeries> series) {
    constexpr int W = 720, H = 480, M = 60;  // canvas and margin
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    auto px = [&](double x) { return M + (x - xlo) / (xhi - xlo) * (W - 2 * M); };
    auto py = [&](double y) { return H - M - (y - ylo) / (yhi - ylo) * (H - 2 * M); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
       << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
    os << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
    os << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
       << "' stroke='black'/>\n";
    os << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
       << "' stroke='black'/>\n";
    os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
       << "</text>\n";
    os << "<text x='" << W / 2 << "' y='" << H - 16 << "' text-anchor='middle' font-size='12'>"
       << xlabel << "</text>\n";
    os << "<text x='18' y='" << H / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 18 "
       << H / 2 << ")'>" << ylabel << "</text>\n";
    // Axis end labels.
    os << "<text x='" << M << "' y='" << H - M + 16 << "' font-size='10'>" << fmt(xlo)
       << "</text>\n";
    os << "<text x='" << W - M << "' y='" << H - M + 16 << "' text-anchor='end' font-size='10'>"
       << fmt(xhi) << "</text>\n";
    os << "<text x='" << M - 4 << "' y='" << H - M << "' text-anchor='end' font-size='10'>"
       << fmt(ylo) << "</text>\n";
    os << "<text x='" << M - 4 << "' y='" << M << "' text-anchor='end' font-size='10'>"
       << fmt(yhi) << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 5];
        if (s.scatter) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << "<circle cx='" << fmt(px(s.x[i])) << "' cy='" << fmt(py(s.y[i]))
                   << "' r='3' fill='" << col << "'/>\n";
        } else {
            os << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            os << "'/>\n";
        }
        os << "<text x='" << W - M + 4 << "' y='" << M + 16 * ci << "' font-size='11' fill='"
           << col << "'>" << s.label << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cle
