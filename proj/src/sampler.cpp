#include "cle/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace cle {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

double polyline_extent(const std::vector<Complex>& p) {
    double xlo = p[0].real(), xhi = xlo, ylo = p[0].imag(), yhi = ylo;
    for (const auto& v : p) {
        xlo = std::min(xlo, v.real());
        xhi = std::max(xhi, v.real());
        ylo = std::min(ylo, v.imag());
        yhi = std::max(yhi, v.imag());
    }
    return std::hypot(xhi - xlo, yhi - ylo);
}

double max_pairwise(const std::vector<Complex>& p) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            best = std::max(best, std::abs(p[i] - p[j]));
    return best;
}

// Rasterizes the boundary around the target and fills the metric fields.
void measure_pocket(PocketSample& s, int resolution) {
    try {
        s.winding = winding_number(s.boundary, s.target);
        s.region = enclosed_component(s.boundary, s.target, resolution);
        s.diameter = diameter(s.region);
        s.area = area(s.region);
        s.dist = distance_to_boundary(s.region, s.target);
        s.cr_lo = s.dist / 4.0;
        s.cr_hi = 4.0 * s.dist;
    } catch (const std::exception&) {
        s.flagged = true;
    }
}

// Variant for pockets that can be many orders of magnitude smaller than
// their bounding walls (the typical gasket pocket: the curve spans scales
// e^{-tau'} down to e^{-tau} and the negative-moment tail makes tau - tau'
// of ten or more routine).  A single raster over the walls' bounding box
// cannot resolve such a pocket at any affordable resolution, so the fill
// box is shrunk geometrically around the target until the pocket registers,
// then refit to the pocket's own bounding box for the measurement.
void measure_pocket_zoom(PocketSample& s, const std::vector<std::vector<Complex>>& walls,
                         int resolution, double floor_extent) {
    double xlo = s.target.real(), xhi = xlo, ylo = s.target.imag(), yhi = ylo;
    for (const auto& chain : walls)
        for (const auto& v : chain) {
            xlo = std::min(xlo, v.real());
            xhi = std::max(xhi, v.real());
            ylo = std::min(ylo, v.imag());
            yhi = std::max(yhi, v.imag());
        }
    Complex lo(xlo, ylo), hi(xhi, yhi);
    const int res = std::max(resolution, 256);

    // Sweep box scales down to the Koebe floor, keeping the largest fill.
    // Boxes above the pocket scale fail with a buried target cell (pocket
    // below one cell); boxes below it fail by running out of the frame; in
    // between the fill resolves the pocket, best at the smallest box that
    // still contains it.  A genuinely unsealed sample fails at every scale.
    std::optional<RasterRegion> best;
    for (;;) {
        try {
            RasterRegion reg = flood_fill_component(walls, s.target, lo, hi, res);
            if (!best || reg.cell_count() > best->cell_count()) best = std::move(reg);
        } catch (const std::exception&) {
        }
        const Complex half = 0.25 * (hi - lo);
        if (std::max(half.real(), half.imag()) < floor_extent) break;
        lo = s.target - half;
        hi = s.target + half;
    }
    if (!best) {
        s.flagged = true;
        return;
    }
    // Refit the box to the pocket's own bounding square; the halving sweep
    // leaves up to a factor of two of wasted box, so this roughly doubles
    // the effective resolution.  A leak here means the padded box clipped
    // the pocket -- widen the pad and retry.
    for (int pass = 0; pass < 4; ++pass) {
        double bxlo = 1e300, bxhi = -1e300, bylo = 1e300, byhi = -1e300;
        for (int j = 0; j < best->ny; ++j)
            for (int i = 0; i < best->nx; ++i) {
                if (!best->filled(i, j)) continue;
                const Complex c = best->center(i, j);
                bxlo = std::min(bxlo, c.real());
                bxhi = std::max(bxhi, c.real());
                bylo = std::min(bylo, c.imag());
                byhi = std::max(byhi, c.imag());
            }
        bool improved = false;
        for (double padf : {0.25, 0.5, 1.0}) {
            const double pad =
                padf * std::max({bxhi - bxlo, byhi - bylo, 8.0 * best->cell_size});
            try {
                RasterRegion reg = flood_fill_component(
                    walls, s.target, Complex(bxlo - pad, bylo - pad),
                    Complex(bxhi + pad, byhi + pad), res);
                if (reg.cell_count() > best->cell_count()) {
                    best = std::move(reg);
                    improved = true;
                }
                break;
            } catch (const std::exception&) {
            }
        }
        if (!improved) break;
    }
    s.region = std::move(*best);
    try {
        s.diameter = diameter(s.region);
        s.area = area(s.region);
        s.dist = distance_to_boundary(s.region, s.target);
        s.cr_lo = s.dist / 4.0;
        s.cr_hi = 4.0 * s.dist;
    } catch (const std::exception&) {
        s.flagged = true;
    }
}

std::size_t pick_stride(std::size_t first, std::size_t last, int target_vertices) {
    const std::size_t span = last - first;
    const auto want = static_cast<std::size_t>(std::max(target_vertices, 8));
    return std::max<std::size_t>(1, span / want);
}

}  // namespace

Disconnection classify_disconnection(const DrivingPath& driving,
                                     const std::vector<ExcursionInterval>& excursions,
                                     const SwallowReport& swallow) {
    (void)driving;
    if (!swallow.swallowed)
        throw std::invalid_argument("classify_disconnection: point was not swallowed");
    // Discrete swallow times land on grid knots, and an excursion's closing
    // zero beta is itself a knot, so the upper end is taken with half a step
    // of slack.
    const double tol = 0.5 * driving.grid.dt;
    for (std::size_t m = 0; m < excursions.size(); ++m)
        if (swallow.tau > excursions[m].alpha && swallow.tau < excursions[m].beta + tol)
            return {false, m};
    return {true, kNpos};
}

PocketSample sample_pocket_gasket(Complex z, const Params& params, RngStream& rng) {
    if (!(std::abs(z) < 1.0))
        throw std::domain_error("sample_pocket_gasket: target must be inside the disk");
    if (!(params.kappa > 4.0 && params.kappa < 8.0))
        throw std::invalid_argument("sample_pocket_gasket: kappa must be in (4,8)");

    PocketSample s;
    s.target = z;
    s.kappa = params.kappa;
    s.seed = rng.seed();
    s.generation_count = 0;

    const double kp = params.kappa;  // kappa' == kappa in this regime
    const double rho = kp - 6.0;
    const auto steps = static_cast<std::size_t>(std::ceil(params.t_max / params.dt));
    const TimeGrid grid(0.0, params.dt, steps);

    RngStream pre_state = rng;
    const ThetaPath th = radial_theta_driver(kp, rho, kTwoPi, grid, rng, params.theta_eps);

    double tau = -1.0;
    for (const auto& [t, side] : th.boundary_hits)
        if (side == 0) {
            tau = t;
            break;
        }
    if (tau < 0.0) {
        s.censored = true;  // theta never closed the loop within the horizon
        return s;
    }
    double tau_prime = 0.0;  // theta starts at 2pi, so t=0 is always a 2pi visit
    for (const auto& [t, side] : th.boundary_hits)
        if (side == 1 && t < tau) tau_prime = std::max(tau_prime, t);
    s.tau = tau;
    s.tau_prime = tau_prime;
    s.theta_at_tau = th.theta[grid.index_at(tau)];
    s.theta_at_tau_prime = th.theta[grid.index_at(tau_prime)];

    const DrivingPath drv = radial_arg_driver(th, kp, rho, 0.0, pre_state, params.theta_eps);

    std::size_t first = grid.index_at(tau_prime);
    std::size_t last = std::min<std::size_t>(grid.index_at(tau) + 1, grid.n);
    if (last < first + 4) last = std::min<std::size_t>(first + 4, grid.n);

    auto make_trace = [&](std::size_t a, std::size_t b) {
        TraceOptions opt;
        opt.first = a;
        opt.last = b;
        opt.stride = pick_stride(a, b, params.trace_vertices);
        return trace_serial(drv, opt);
    };
    // Winding of the chord-closed polyline suffix v[a..] about the origin.
    auto suffix_winding = [](const std::vector<Complex>& v, std::size_t a) {
        try {
            return winding_number(std::span(v).subspan(a), Complex(0.0, 0.0));
        } catch (const std::exception&) {
            return 99;  // target within winding tolerance of the curve
        }
    };

    const DiskMobius psi = mobius_to_origin(z).inverse();

    // In the continuum the tip lands at time tau on an interior point of the
    // already traced curve; the discrete trace stops an aperture short, so a
    // chord from the tip to the nearest earlier strand stands in for the
    // touch.  The pocket boundary is the sub-loop from that touch point to
    // the tip; the head of the window dangles outside the loop, and a
    // straight front-to-back closure would cut across the pocket interior.
    struct LoopCandidate {
        std::vector<Complex> mapped;  // trimmed window, disk coordinates
        std::size_t nearest = 0;      // touch-strand vertex for the seal
        double gap = 1e300;           // seal length / curve diameter
        double extent = 0.0;          // pre-map window extent
        double diameter_centered = 0.0;
        int window_winding = 0;       // raw chord-closed window winding
        int loop_winding = 0;         // of the sealed sub-loop
        bool ok = false;
    };
    auto build = [&](std::size_t upto) {
        LoopCandidate c;
        const Trace tr = make_trace(first, upto);
        // The dangling head can contribute a spurious +1 that masks the
        // clockwise loop (windings 0 or +1) and an unrecorded near miss of
        // 2pi before tau' can add a second turn (winding -2); in every such
        // case some suffix of the window winds exactly once, so the head is
        // trimmed back until it does.
        int w = suffix_winding(tr.vertices, 0);
        c.window_winding = w == 99 ? 0 : w;
        std::size_t trim = 0;
        if (w != -1) {
            for (std::size_t a = 1; a + 4 < tr.vertices.size(); ++a)
                if (suffix_winding(tr.vertices, a) == -1) {
                    trim = a;
                    w = -1;
                    break;
                }
        }
        std::vector<Complex> verts(tr.vertices.begin() + static_cast<std::ptrdiff_t>(trim),
                                   tr.vertices.end());
        c.extent = polyline_extent(verts);
        c.diameter_centered = max_pairwise(verts);
        c.mapped.reserve(verts.size());
        for (const auto& v : verts) c.mapped.push_back(psi(v));
        if (w != -1 || c.extent < 1e-12) return c;

        double dbest = 1e300;
        const std::size_t cut = (c.mapped.size() * 9) / 10;
        for (std::size_t i = 0; i < cut; ++i) {
            const double d = std::abs(c.mapped[i] - c.mapped.back());
            if (d < dbest) {
                dbest = d;
                c.nearest = i;
            }
        }
        const double curve_diam = max_pairwise(c.mapped);
        c.gap = curve_diam > 0.0 ? dbest / curve_diam : 0.0;
        try {
            std::vector<Complex> loop(c.mapped.begin() + static_cast<std::ptrdiff_t>(c.nearest),
                                      c.mapped.end());
            c.loop_winding = winding_number(loop, s.target);
        } catch (const std::exception&) {
            c.loop_winding = 0;
        }
        c.ok = c.loop_winding == -1;
        return c;
    };

    // The theta hit marks the continuum pinch but the discrete trace stops
    // an aperture short of closure; pushing the window end slightly past tau
    // moves the tip through the throat and shrinks the aperture, so the
    // window is extended until the sealed loop exists and its gap is small.
    LoopCandidate best = build(last);
    std::size_t last_try = last;
    const std::size_t span = last > first ? last - first : 1;
    for (int tries = 0; tries < 8; ++tries) {
        if (best.ok && best.gap <= 0.1) break;
        if (last_try >= grid.n) break;
        const std::size_t step =
            best.ok ? std::max<std::size_t>(8, span / 256)
                    : std::max<std::size_t>(16, span / 16);
        last_try = std::min(grid.n, last_try + step);
        LoopCandidate c = build(last_try);
        if (!best.ok ? (c.ok || c.window_winding != best.window_winding)
                     : (c.ok && c.gap < best.gap))
            best = std::move(c);
    }

    s.winding = best.ok ? best.loop_winding : best.window_winding;
    s.gap_fraction = best.ok ? best.gap : 0.0;
    s.diameter_centered = best.diameter_centered;

    if (!best.ok || best.gap > 0.1) {
        s.boundary = best.mapped;  // open window for the record
        s.flagged = true;          // no cleanly sealed clockwise loop
        return s;
    }
    s.boundary.assign(best.mapped.begin() + static_cast<std::ptrdiff_t>(best.nearest),
                      best.mapped.end());
    s.boundary.push_back(s.boundary.front());  // the sealing chord
    std::vector<std::vector<Complex>> walls{best.mapped};
    walls.push_back({best.mapped.back(), best.mapped[best.nearest]});

    // Koebe floor for the shrink loop, carried through the Mobius map-back
    // (|psi'(0)| = 1 - |z|^2).  The pocket core lives at the
    // conformal-radius scale exp(-tau), typically far below the curve's
    // extent, so the measurement uses the zooming rasterizer.
    const double floor_extent =
        std::max(1e-13, std::exp(-s.tau) * (1.0 - std::norm(z)) / 64.0);
    measure_pocket_zoom(s, walls, params.raster_resolution, floor_extent);
    return s;
}

PocketSample sample_loop_carpet(Complex z, const Params& params, RngStream& rng) {
    if (!(std::abs(z) < 1.0))
        throw std::domain_error("sample_loop_carpet: target must be inside the disk");
    if (!(params.kappa > 8.0 / 3.0 && params.kappa < 4.0))
        throw std::invalid_argument("sample_loop_carpet: kappa must be in (8/3,4)");

    PocketSample s;
    s.target = z;
    s.kappa = params.kappa;
    s.seed = rng.seed();

    const Complex I(0.0, 1.0);
    auto cayley_inv = [I](Complex w) { return (w - I) / (w + I); };  // H -> D, i -> 0

    // Composable map-backs from the current half-plane to the original disk.
    std::vector<std::function<Complex(Complex)>> pulls;
    {
        const DiskMobius psi = mobius_to_origin(z).inverse();
        pulls.push_back([psi, cayley_inv](Complex w) { return psi(cayley_inv(w)); });
    }

    const auto steps = static_cast<std::size_t>(std::ceil(params.t_max / params.dt));
    const TimeGrid grid(0.0, params.dt, steps);

    const double sk = std::sqrt(params.kappa);
    const double ztol = std::sqrt(params.dt);
    const int fill_res = std::max(512, params.raster_resolution);

    for (int gen = 0; gen <= params.max_recursion; ++gen) {
        auto [drv, exc] = bessel_trunk_driver(params, grid, rng);

        // Seal chords at the discrete zeros of X = (W - O)/sqrt(kappa).  In
        // the continuum the tip touches the force-point prime end at each
        // zero, closing off a component; the discrete trace stops an
        // aperture short, so a short chord from the tip position to the
        // preimage of O stands in for the touch.
        std::vector<std::vector<Complex>> seals;
        std::size_t seal_done = 1;
        auto extend_seals = [&](std::size_t upto) {
            auto x_at = [&](std::size_t j) { return (drv.w[j] - drv.o[j]) / sk; };
            while (seal_done < upto) {
                if (x_at(seal_done) > ztol) {
                    ++seal_done;
                    continue;
                }
                std::size_t bi = seal_done;
                double best = x_at(bi);
                while (seal_done < upto && x_at(seal_done) <= ztol) {
                    if (x_at(seal_done) < best) {
                        best = x_at(seal_done);
                        bi = seal_done;
                    }
                    ++seal_done;
                }
                if (bi < 4) continue;
                const Complex tip = trace_vertex(drv, bi);
                const Complex anchor = chordal_boundary_preimage(drv, bi, drv.o[bi]);
                // A preimage evaluated through a pinched throat can land far
                // off; a seal is only trustworthy at aperture length.
                if (std::abs(tip - anchor) < 0.2 * (1.0 + std::abs(tip)))
                    seals.push_back({tip, anchor});
            }
        };

        // Fill the component of the target against the traced hull, the real
        // axis and every seal.  A bounded fill IS the disconnection test: if
        // the target still connects to the box border the event was a close
        // pass, not a capture.
        Trace tr;
        auto try_event = [&](std::size_t k) -> std::optional<RasterRegion> {
            extend_seals(k);
            TraceOptions o;
            o.last = std::max<std::size_t>(std::min(k, grid.n), 8);
            o.stride = pick_stride(0, o.last, 4 * params.trace_vertices);
            o.residual_checks = 0;
            tr = trace_serial(drv, o);
            double xlo = 0.0, xhi = 0.0, yhi = 1.0;
            for (const auto& v : tr.vertices) {
                xlo = std::min(xlo, v.real());
                xhi = std::max(xhi, v.real());
                yhi = std::max(yhi, v.imag());
            }
            const double pad = 0.1 * std::max(xhi - xlo, yhi) + 1e-6;
            std::vector<std::vector<Complex>> walls{tr.vertices};
            walls.push_back({Complex(xlo - pad, 0.0), Complex(xhi + pad, 0.0)});
            for (const auto& sc : seals) walls.push_back(sc);
            // Seal the pinch that fired this event: tip against the nearest
            // strand of the already-traced hull (or the real axis).
            const Complex tail = tr.vertices.back();
            const std::size_t cutoff = tr.vertices.size() * 9 / 10;
            Complex near = tr.vertices.front();
            double bd = 1e300;
            for (std::size_t v = 0; v < cutoff; ++v) {
                const double d = std::abs(tr.vertices[v] - tail);
                if (d < bd) {
                    bd = d;
                    near = tr.vertices[v];
                }
            }
            if (std::abs(tail.imag()) < bd) near = Complex(tail.real(), 0.0);
            walls.push_back({tail, near});

            auto fill_at = [&](int res) -> std::optional<RasterRegion> {
                try {
                    RasterRegion reg = flood_fill_component(walls, I, Complex(xlo - pad, 0.0),
                                                            Complex(xhi + pad, yhi + pad), res);
                    // Zoom in while the pocket is only a handful of cells.
                    for (int zoom = 0; zoom < 3 && reg.cell_count() < 1024; ++zoom) {
                        double bxlo = 1e300, bxhi = -1e300, bylo = 1e300, byhi = -1e300;
                        for (int j = 0; j < reg.ny; ++j)
                            for (int i = 0; i < reg.nx; ++i) {
                                if (!reg.filled(i, j)) continue;
                                const Complex c = reg.center(i, j);
                                bxlo = std::min(bxlo, c.real());
                                bxhi = std::max(bxhi, c.real());
                                bylo = std::min(bylo, c.imag());
                                byhi = std::max(byhi, c.imag());
                            }
                        const double bpad =
                            0.5 * std::max({bxhi - bxlo, byhi - bylo, 4.0 * reg.cell_size});
                        try {
                            reg = flood_fill_component(
                                walls, I, Complex(bxlo - bpad, std::max(0.0, bylo - bpad)),
                                Complex(bxhi + bpad, byhi + bpad), res);
                        } catch (const std::exception&) {
                            break;  // keep the coarser but valid region
                        }
                    }
                    if (reg.cell_count() < 9) return std::nullopt;
                    return reg;
                } catch (const std::exception&) {
                    return std::nullopt;
                }
            };

            // The pocket must hold the target strictly inside its contour of
            // boundary-cell centers; when the target sits within a cell of
            // the wall the contour can cut it off, so retry finer.
            for (int res = fill_res; res <= 4 * fill_res; res *= 2) {
                auto reg = fill_at(res);
                if (!reg) return std::nullopt;
                try {
                    const std::vector<Complex> c = boundary_contour(*reg);
                    if (c.size() >= 8 && std::abs(winding_number(c, I)) == 1) return reg;
                } catch (const std::exception&) {
                }
            }
            return std::nullopt;
        };

        double tau = -1.0;
        std::optional<RasterRegion> pocket;
        double last_tested = -1e300;
        for (const auto& ev : chordal_approaches(drv, I, grid.horizon(), 512, 10.0)) {
            // Events cluster on consecutive grid knots around one pinch;
            // retesting the same geometry is wasted work.
            if (ev.tau - last_tested < 20.0 * params.dt) continue;
            last_tested = ev.tau;
            const std::size_t k = grid.index_at(ev.tau);
            if (k < 8) continue;
            if ((pocket = try_event(k))) {
                tau = ev.tau;
                break;
            }
        }
        if (!pocket) {
            s.censored = true;  // no capture within the horizon
            return s;
        }

        const SwallowReport rep{I, true, tau, Complex{}};
        const Disconnection cls = classify_disconnection(drv, exc, rep);
        bool loop = false;
        std::vector<Complex> window;
        if (!cls.trunk) {
            // Excursion pinch: the sample is a loop only when the excursion's
            // own window winds around the target (the same pinch can instead
            // seal the region between the loop and the earlier hull).
            const ExcursionInterval& e = exc[cls.excursion];
            for (std::size_t v = 0; v < tr.vertices.size(); ++v)
                if (tr.capacity_times[v] >= e.alpha - 1e-12) window.push_back(tr.vertices[v]);
            if (window.size() >= 4) {
                try {
                    loop = std::abs(winding_number(window, I)) == 1;
                } catch (const std::exception&) {
                    loop = false;
                }
            }
        }

        std::vector<Complex> contour;
        try {
            // Shave off raster fjords (channels one or two cells wide between
            // nearby trace strands): their harmonic measure underflows double
            // precision and poisons the Riemann map, while the pocket bulk
            // that the recursion continues into is unaffected.
            RasterRegion bulk = *pocket;
            try {
                bulk = open_region(*pocket, 1, I);
            } catch (const std::exception&) {
            }
            contour = boundary_contour(bulk);
        } catch (const std::exception&) {
            s.flagged = true;
            return s;
        }
        if (contour.size() < 8) {
            s.flagged = true;
            return s;
        }

        if (loop) {
            const ExcursionInterval& e = exc[cls.excursion];
            s.excursion_index = cls.excursion;
            s.tau = tau;
            s.tau_prime = e.alpha;
            const double ext = polyline_extent(window);
            s.gap_fraction = ext > 0.0 ? std::abs(window.front() - window.back()) / ext : 0.0;
            s.diameter_centered = max_pairwise(window);
            const std::size_t step =
                std::max<std::size_t>(1, contour.size() / (2 * params.trace_vertices));
            s.boundary.clear();
            for (std::size_t v = 0; v < contour.size(); v += step) {
                Complex w = contour[v];
                for (auto it = pulls.rbegin(); it != pulls.rend(); ++it) w = (*it)(w);
                s.boundary.push_back(w);
            }
            measure_pocket(s, params.raster_resolution);
            return s;
        }

        // Trunk-type capture: recurse into the pocket containing the target.
        if (gen == params.max_recursion) {
            s.censored = true;
            return s;
        }
        // The default shave may leave wider fjords in place; widen the
        // opening until the map certifies or the pocket core would be eaten.
        std::optional<NumericalRiemannMap> zm_opt;
        try {
            NumericalRiemannMap cand = riemann_map_zipper(contour, I, 256);
            if (cand.roundtrip_error() < 1e-3) zm_opt.emplace(std::move(cand));
        } catch (const std::exception&) {
        }
        for (int rad = 2; rad <= 8 && !zm_opt; rad *= 2) {
            try {
                const std::vector<Complex> rim = boundary_contour(open_region(*pocket, rad, I));
                if (rim.size() < 8) continue;
                NumericalRiemannMap cand = riemann_map_zipper(rim, I, 256);
                if (cand.roundtrip_error() < 1e-3) zm_opt.emplace(std::move(cand));
            } catch (const std::exception&) {
            }
        }
        if (!zm_opt) {
            s.flagged = true;  // fidelity failure of the sub-domain map
            return s;
        }
        const NumericalRiemannMap& zm = *zm_opt;
        // Rotate the disk so the pinch point becomes the new curve's root
        // (the Cayley map below sends w = -1 to the origin of H).
        Complex pinch = zm.forward(tr.vertices.back());
        if (std::abs(pinch) > 0.0) pinch /= std::abs(pinch);
        const Complex rot = pinch == Complex(0.0, 0.0) ? Complex(1.0, 0.0) : -1.0 / pinch;
        pulls.push_back([zm, rot, cayley_inv](Complex w) {
            return zm.inverse(cayley_inv(w) / rot);
        });
        s.generation_count += 1;
    }
    s.censored = true;
    return s;
}

std::vector<PocketSample> sample_ensemble(Complex z, const Params& params, std::size_t n,
                                          std::uint64_t first_stream, bool parallel) {
    std::vector<PocketSample> out(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        RngStream rng(params.seed, first_stream + static_cast<std::uint64_t>(i));
        PocketSample s;
        try {
            s = params.kappa < 4.0 ? sample_loop_carpet(z, params, rng)
                                   : sample_pocket_gasket(z, params, rng);
        } catch (const std::exception&) {
            s.target = z;
            s.kappa = params.kappa;
            s.seed = params.seed;
            s.flagged = true;
        }
        out[static_cast<std::size_t>(i)] = std::move(s);
    }
    return out;
}

double pocket_zipper_cr(PocketSample& s, int resample) {
    if (s.boundary.size() < 3)
        throw std::invalid_argument("pocket_zipper_cr: sample has no boundary");
    const int rs = resample > 0 ? resample
                                : static_cast<int>(std::min<std::size_t>(s.boundary.size(), 300));
    const NumericalRiemannMap map = riemann_map_zipper(s.boundary, s.target, rs);
    s.cr_zipper = map.conformal_radius();
    return s.cr_zipper;
}

}  // namespace cle
