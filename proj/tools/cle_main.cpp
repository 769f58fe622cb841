#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "cle/drivers.hpp"
#include "cle/loewner.hpp"
#include "cle/sampler.hpp"
#include "cle/serialize.hpp"
#include "cle/stats.hpp"

namespace {

using cle::Complex;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
    double kappa = 6.0;
    std::string z_str = "0,0";
    std::size_t n = 10;
    std::uint64_t seed = 1;
    double dt = 1e-3;
    double t_max = 50.0;
    int resolution = 256;
    int threads = 0;
    std::string out;
    bool plot = false;
};

Complex parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("z", "expected complex as re,im");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("z", "expected complex as re,im");
    }
}

void apply_threads(int threads) {
    if (threads <= 0)
        if (const char* env = std::getenv("CLE_THREADS")) threads = std::atoi(env);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

cle::Params make_params(const CommonOpts& o) {
    cle::Params p = cle::Params::make(o.kappa, o.dt, o.t_max, o.seed);
    p.raster_resolution = o.resolution;
    return p;
}

cle::RunConfig make_config(const std::string& command, const CommonOpts& o, Complex z) {
    cle::RunConfig cfg;
    cfg.command = command;
    cfg.kappa = o.kappa;
    cfg.z = z;
    cfg.n = o.n;
    cfg.seed = o.seed;
    cfg.dt = o.dt;
    cfg.t_max = o.t_max;
    cfg.raster_resolution = o.resolution;
    cfg.threads = o.threads;
    cfg.out = o.out;
    cfg.plot = o.plot;
    return cfg;
}

struct CheckList {
    json report = json::array();
    bool all_ok = true;

    void add(const std::string& name, bool ok, double value = 0.0) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "  (" << value << ")\n";
        report.push_back({{"name", name}, {"ok", ok}, {"value", value}});
        all_ok &= ok;
    }
};

int run_verify(const std::string& suite, const std::string& out) {
    CheckList checks;
    if (suite == "loewner") {
        // Closed form for zero driving: g_t(z) = sqrt(z^2 + 4t).
        const cle::TimeGrid grid(0.0, 1e-4, 10000);
        cle::DrivingPath drv;
        drv.grid = grid;
        drv.w.assign(grid.points(), 0.0);
        double worst = 0.0;
        for (int i = 1; i <= 5; ++i)
            for (int j = 1; j <= 5; ++j) {
                const Complex z(-2.0 + i * 0.8, 0.4 * j);
                const auto r = cle::chordal_forward(drv, z, 1.0);
                Complex exact = std::sqrt(z * z + 4.0);  // branch with g ~ z at infinity
                if (z.real() < 0.0) exact = -exact;
                worst = std::max(worst, std::abs(r.g - exact) / std::abs(exact));
            }
        checks.add("chordal zero-driving closed form rel error < 1e-6", worst < 1e-6, worst);

        cle::RngStream rng(7, 0);
        const cle::DrivingPath rad = [&] {
            cle::DrivingPath d = cle::brownian_driver(6.0, cle::TimeGrid(0.0, 1e-4, 20000), rng);
            d.flavor = cle::Flavor::radial;
            return d;
        }();
        double dworst = 0.0;
        for (double t : {0.5, 1.0, 2.0}) {
            const double h = 1e-5;
            const Complex g1 = cle::radial_forward(rad, Complex(h, 0.0), t).g;
            const Complex g2 = cle::radial_forward(rad, Complex(-h, 0.0), t).g;
            const double deriv = std::abs(g1 - g2) / (2.0 * h);
            dworst = std::max(dworst, std::abs(deriv - std::exp(t)) / std::exp(t));
        }
        checks.add("radial |g'(0)| = e^t rel error < 1e-3", dworst < 1e-3, dworst);
    } else if (suite == "drivers") {
        cle::RngStream rng(11, 0);
        const cle::TimeGrid grid(0.0, 1e-3, 1000);
        double sum = 0.0, sumsq = 0.0;
        const int paths = 2000;
        for (int i = 0; i < paths; ++i) {
            cle::RngStream r(11, static_cast<std::uint64_t>(i));
            const auto z = cle::sample_squared_bessel(1.0 / 3.0, 0.0, grid, r);
            sum += z.back();
            sumsq += z.back() * z.back();
        }
        const double mean = sum / paths;
        const double se = std::sqrt((sumsq / paths - mean * mean) / paths);
        checks.add("squared-Bessel mean Z_1 = delta within 3 SE",
                   std::abs(mean - 1.0 / 3.0) <= 3.0 * se, mean);

        cle::RngStream ra(13, 5), rb(13, 5);
        const auto brown = cle::brownian_driver(6.0, grid, ra);
        const auto rho0 =
            cle::sle_rho_driver(6.0, 0.0, cle::ForceSide::right, grid, rb);
        double dev = 0.0;
        for (std::size_t k = 0; k < brown.w.size(); ++k)
            dev = std::max(dev, std::abs(brown.w[k] - rho0.w[k]));
        checks.add("rho=0 driver identical to Brownian driver", dev == 0.0, dev);
    } else if (suite == "conformal") {
        const Complex z(0.3, -0.2);
        const auto phi = cle::mobius_to_origin(z);
        checks.add("mobius_to_origin sends z to 0", std::abs(phi(z)) < 1e-14, std::abs(phi(z)));
        const double dmag = std::abs(phi.derivative(z));
        const double expect = 1.0 / (1.0 - std::norm(z));
        checks.add("|phi'(z)| = 1/(1-|z|^2)", std::abs(dmag - expect) < 1e-12, dmag);
        bool all = true;
        cle::RngStream rng(3, 0);
        for (int i = 0; i < 50; ++i) {
            const double r = 0.05 + 0.1 * rng.uniform();
            const Complex c(0.5 * (rng.uniform() - 0.5), 0.5 * (rng.uniform() - 0.5));
            const Complex u1 = c + 0.8 * r * std::polar(rng.uniform(), 6.28 * rng.uniform());
            const Complex u2 = c + 0.8 * r * std::polar(rng.uniform(), 6.28 * rng.uniform());
            all = all && cle::distortion_bounds_check(c, r, u1, u2);
        }
        checks.add("distortion bounds on random grid", all, all ? 1.0 : 0.0);
        std::vector<Complex> circle;
        for (int k = 0; k < 256; ++k)
            circle.push_back(std::polar(1.0, 6.283185307179586 * k / 256));
        const auto map = cle::riemann_map_zipper(circle, Complex(0.0, 0.0));
        const double cr = map.conformal_radius();
        checks.add("zipper conformal radius of unit disk = 1 within 1%",
                   std::abs(cr - 1.0) < 0.01, cr);
    } else if (suite == "geometry") {
        std::vector<Complex> circle;
        for (int k = 0; k < 360; ++k)
            circle.push_back(std::polar(1.0, 6.283185307179586 * k / 360));
        checks.add("winding of ccw circle around 0 is +1",
                   cle::winding_number(circle, Complex(0, 0)) == 1, 1);
        checks.add("winding around exterior point is 0",
                   cle::winding_number(circle, Complex(2, 0)) == 0, 0);
        const auto region = cle::enclosed_component(circle, Complex(0, 0), 256);
        const double a = cle::area(region);
        checks.add("unit disk raster area pi within 2%",
                   std::abs(a - 3.14159265358979) / 3.14159265358979 < 0.02, a);
        const double d = cle::diameter(region);
        checks.add("unit disk raster diameter 2 within 2 cells",
                   std::abs(d - 2.0) <= 2.0 * region.cell_size, d);
        const std::vector<Complex> eight{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
        checks.add("figure-eight has one self-intersection",
                   cle::self_intersections(eight) == 1, 1);
    } else {
        std::cerr << "unknown verify suite: " << suite << '\n';
        return kExitUsage;
    }

    const json doc{{"format", cle::kFormatVersion},
                   {"suite", suite},
                   {"checks", checks.report},
                   {"ok", checks.all_ok}};
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) {
            std::cerr << "cannot write " << out << '\n';
            return kExitIo;
        }
        os << doc.dump(2) << '\n';
    } else {
        std::cout << doc.dump(2) << '\n';
    }
    return checks.all_ok ? kExitOk : kExitCheckFailed;
}

int run_sample(const CommonOpts& o) {
    const Complex z = parse_complex(o.z_str);
    if (std::abs(z) >= 1.0) throw CLI::ValidationError("z", "target must satisfy |z| < 1");
    apply_threads(o.threads);
    const cle::Params params = make_params(o);
    const auto samples = cle::sample_ensemble(z, params, o.n);

    std::size_t bad = 0;
    for (const auto& s : samples) bad += !s.usable();
    const cle::RunConfig cfg = make_config("sample", o, z);
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        if (!os) {
            std::cerr << "cannot write " << o.out << '\n';
            return kExitIo;
        }
        cle::write_pockets_json(os, cfg, samples);
    } else {
        cle::write_pockets_json(std::cout, cfg, samples);
    }
    std::cout << "samples=" << samples.size() << " censored_or_flagged=" << bad
              << " censoring_rate=" << static_cast<double>(bad) / samples.size() << '\n';
    return kExitOk;
}

int run_stats(const CommonOpts& o, std::vector<double> radii) {
    if (o.out.empty()) throw CLI::RequiredError("--out");
    apply_threads(o.threads);
    const cle::Params params = make_params(o);
    if (radii.empty()) radii = {0.0, 0.5, 0.75, 0.875};

    std::vector<cle::IntegrandSample> rows;
    std::vector<double> all_diams;
    for (double rho : radii) {
        const Complex z(rho, 0.0);
        const auto samples = cle::sample_ensemble(z, params, o.n);
        rows.push_back(cle::integrand_from_samples(z, samples, params.seed));
        for (const auto& s : samples)
            if (s.usable()) all_diams.push_back(s.diameter);
    }
    const cle::RunConfig cfg = make_config("stats", o, Complex(0, 0));
    {
        std::ofstream os(o.out);
        if (!os) {
            std::cerr << "cannot write " << o.out << '\n';
            return kExitIo;
        }
        cle::write_integrand_csv(os, cfg, rows);
    }

    const auto fit = cle::boundary_blowup_fit(rows);
    const auto integral = cle::radial_profile_integral(rows, fit);
    std::cout << "integral=" << integral.value << " ci=[" << integral.ci_lo << ','
              << integral.ci_hi << "] divergent=" << integral.divergent << '\n';
    std::cout << "blowup_alpha=" << fit.alpha << " ci=[" << fit.alpha_ci_lo << ','
              << fit.alpha_ci_hi << "]\n";

    if (o.plot) {
        std::sort(all_diams.begin(), all_diams.end(), std::greater<>());
        const auto ps = cle::partial_sums(all_diams);
        std::vector<cle::PlotSeries> series1(1), series2(1);
        series1[0].label = "mean diam^2/area";
        series1[0].scatter = true;
        for (const auto& r : rows) {
            series1[0].x.push_back(std::abs(r.z));
            series1[0].y.push_back(r.mean);
        }
        series2[0].label = "S_N";
        for (std::size_t i = 0; i < ps.sums.size(); ++i) {
            series2[0].x.push_back(static_cast<double>(i + 1));
            series2[0].y.push_back(ps.sums[i]);
        }
        std::ofstream p1(o.out + ".integrand.svg"), p2(o.out + ".partial_sums.svg");
        if (!p1 || !p2) {
            std::cerr << "cannot write plots next to " << o.out << '\n';
            return kExitIo;
        }
        p1 << cle::svg_plot("integrand vs radius", "|z|", "mean diam^2/area", series1);
        p2 << cle::svg_plot("partial sums of diam^2", "N", "S_N", series2);
    }
    return kExitOk;
}

int run_trace(const CommonOpts& o, const std::string& driver, double rho) {
    apply_threads(o.threads);
    const auto steps = static_cast<std::size_t>(std::ceil(o.t_max / o.dt));
    const cle::TimeGrid grid(0.0, o.dt, steps);
    cle::RngStream rng(o.seed, 0);
    cle::DrivingPath drv;
    if (driver == "brownian") {
        drv = cle::brownian_driver(o.kappa, grid, rng);
    } else if (driver == "rho") {
        drv = cle::sle_rho_driver(o.kappa, rho, cle::ForceSide::right, grid, rng);
    } else if (driver == "bessel") {
        const cle::Params params = make_params(o);
        drv = cle::bessel_trunk_driver(params, grid, rng).first;
    } else {
        std::cerr << "unknown driver: " << driver << '\n';
        return kExitUsage;
    }
    cle::TraceOptions opt;
    opt.stride = std::max<std::size_t>(1, grid.n / 2000);
    const cle::Trace tr = cle::trace(drv, opt);

    json pts = json::array();
    for (std::size_t i = 0; i < tr.vertices.size(); ++i)
        pts.push_back({tr.capacity_times[i], tr.vertices[i].real(), tr.vertices[i].imag()});
    const cle::RunConfig cfg = make_config("trace", o, Complex(0, 0));
    const json doc{{"config", json::parse(cle::run_config_json(cfg))},
                   {"driver", driver},
                   {"vertices", std::move(pts)}};
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        if (!os) {
            std::cerr << "cannot write " << o.out << '\n';
            return kExitIo;
        }
        os << doc.dump(2) << '\n';
    } else {
        std::cout << doc.dump(2) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop-ensemble pocket simulation and statistics"};
    app.require_subcommand(1);

    std::string verify_suite, verify_out;
    auto* verify = app.add_subcommand("verify", "run a deterministic check suite");
    verify->add_option("suite", verify_suite, "loewner|drivers|conformal|geometry")->required();
    verify->add_option("--out", verify_out, "write the JSON report here");

    CommonOpts so;
    auto* sample = app.add_subcommand("sample", "draw pocket samples at a target point");
    sample->add_option("--kappa", so.kappa)->required();
    sample->add_option("--z", so.z_str, "target as re,im");
    sample->add_option("--n", so.n);
    sample->add_option("--seed", so.seed);
    sample->add_option("--dt", so.dt);
    sample->add_option("--t-max", so.t_max);
    sample->add_option("--resolution", so.resolution);
    sample->add_option("--threads", so.threads);
    sample->add_option("--out", so.out);

    CommonOpts st;
    std::vector<double> radii;
    auto* stats = app.add_subcommand("stats", "integrand sweep, integral estimate, plots");
    stats->add_option("--kappa", st.kappa)->required();
    stats->add_option("--radii", radii, "radial strata, e.g. 0 0.5 0.75 0.875");
    stats->add_option("--samples", st.n, "samples per radius");
    stats->add_option("--seed", st.seed);
    stats->add_option("--dt", st.dt);
    stats->add_option("--t-max", st.t_max);
    stats->add_option("--resolution", st.resolution);
    stats->add_option("--threads", st.threads);
    stats->add_option("--out", st.out);
    stats->add_flag("--plot", st.plot);

    CommonOpts tr;
    std::string tr_driver = "brownian";
    double tr_rho = 0.0;
    auto* trace = app.add_subcommand("trace", "dump one trace (debugging aid)");
    trace->add_option("--kappa", tr.kappa)->required();
    trace->add_option("--driver", tr_driver, "brownian|rho|bessel");
    trace->add_option("--rho", tr_rho);
    trace->add_option("--dt", tr.dt);
    trace->add_option("--t-max", tr.t_max);
    trace->add_option("--seed", tr.seed);
    trace->add_option("--threads", tr.threads);
    trace->add_option("--out", tr.out);

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return run_verify(verify_suite, verify_out);
        if (sample->parsed()) return run_sample(so);
        if (stats->parsed()) return run_stats(st, radii);
        if (trace->parsed()) return run_trace(tr, tr_driver, tr_rho);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
