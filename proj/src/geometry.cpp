#include "cle/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>

namespace cle {
namespace {

double dist_point_segment(Complex z, Complex a, Complex b) {
    const Complex ab = b - a;
    const double L2 = std::norm(ab);
    if (L2 == 0.0) return std::abs(z - a);
    double t = ((z.real() - a.real()) * ab.real() + (z.imag() - a.imag()) * ab.imag()) / L2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

// Strictly transversal intersection of open segments.
bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
           ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace

std::size_t RasterRegion::cell_count() const {
    std::size_t c = 0;
    for (auto b : bitmap) c += b != 0;
    return c;
}

int winding_number(std::span<const Complex> polyline, Complex z, double tol) {
    if (polyline.size() < 3) throw std::invalid_argument("winding_number: need >= 3 vertices");
    const std::size_t n = polyline.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polyline[i];
        const Complex b = polyline[(i + 1) % n];
        if (dist_point_segment(z, a, b) <= tol)
            throw std::domain_error("winding_number: point within tolerance of the curve");
        total += std::arg((b - z) / (a - z));
    }
    return static_cast<int>(std::lround(total / 6.283185307179586));
}

std::size_t self_intersections(std::span<const Complex> polyline) {
    std::size_t n = polyline.size();
    if (n >= 2 && polyline.front() == polyline.back()) --n;  // drop explicit closure
    if (n < 3) throw std::invalid_argument("self_intersections: need >= 2 segments");
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closure
            const Complex a = polyline[i], b = polyline[(i + 1) % n];
            const Complex c = polyline[j], d = polyline[(j + 1) % n];
            if (a == c || a == d || b == c || b == d) continue;
            if (segments_cross(a, b, c, d)) ++count;
        }
    }
    return count;
}

namespace {

// Marks every cell whose closed square the segment touches (supercover walk).
void mark_segment(std::vector<std::uint8_t>& blocked, int nx, int ny, Complex p, Complex q) {
    auto mark = [&](int i, int j) {
        if (i >= 0 && j >= 0 && i < nx && j < ny)
            blocked[static_cast<std::size_t>(j) * nx + i] = 1;
    };
    double x = p.real(), y = p.imag();
    const double dx = q.real() - x, dy = q.imag() - y;
    int i = static_cast<int>(std::floor(x)), j = static_cast<int>(std::floor(y));
    const int iend = static_cast<int>(std::floor(q.real()));
    const int jend = static_cast<int>(std::floor(q.imag()));
    const int sx = dx > 0.0 ? 1 : -1, sy = dy > 0.0 ? 1 : -1;
    const double tdx = dx != 0.0 ? std::abs(1.0 / dx) : 1e300;
    const double tdy = dy != 0.0 ? std::abs(1.0 / dy) : 1e300;
    double tmx = dx != 0.0 ? ((sx > 0 ? std::floor(x) + 1.0 - x : x - std::floor(x)) * tdx) : 1e300;
    double tmy = dy != 0.0 ? ((sy > 0 ? std::floor(y) + 1.0 - y : y - std::floor(y)) * tdy) : 1e300;
    mark(i, j);
    for (int guard = 0; guard < 4 * (nx + ny) && (i != iend || j != jend); ++guard) {
        if (std::abs(tmx - tmy) < 1e-12) {
            // Exact corner crossing: cover both side cells so no diagonal gap opens.
            mark(i + sx, j);
            mark(i, j + sy);
            i += sx;
            j += sy;
            tmx += tdx;
            tmy += tdy;
        } else if (tmx < tmy) {
            i += sx;
            tmx += tdx;
        } else {
            j += sy;
            tmy += tdy;
        }
        mark(i, j);
    }
}

// Liang-Barsky clip of segment p-q to [lo, hi]^2 in cell units; false when
// the segment misses the rectangle entirely.
bool clip_segment(Complex& p, Complex& q, double lox, double hix, double loy, double hiy) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = q.real() - p.real(), dy = q.imag() - p.imag();
    const double pvals[4] = {-dx, dx, -dy, dy};
    const double qvals[4] = {p.real() - lox, hix - p.real(), p.imag() - loy, hiy - p.imag()};
    for (int k = 0; k < 4; ++k) {
        if (pvals[k] == 0.0) {
            if (qvals[k] < 0.0) return false;
            continue;
        }
        const double t = qvals[k] / pvals[k];
        if (pvals[k] < 0.0) {
            if (t > t1) return false;
            t0 = std::max(t0, t);
        } else {
            if (t < t0) return false;
            t1 = std::min(t1, t);
        }
    }
    const Complex np = p + t0 * Complex(dx, dy);
    const Complex nq = p + t1 * Complex(dx, dy);
    p = np;
    q = nq;
    return true;
}

}  // namespace

RasterRegion flood_fill_component(const std::vector<std::vector<Complex>>& walls, Complex z,
                                  Complex box_lo, Complex box_hi, int resolution) {
    if (resolution < 16) throw std::invalid_argument("flood_fill_component: resolution < 16");
    const double xlo = box_lo.real(), xhi = box_hi.real();
    const double ylo = box_lo.imag(), yhi = box_hi.imag();
    const double extent = std::max(xhi - xlo, yhi - ylo);
    if (!(extent > 0.0)) throw std::invalid_argument("flood_fill_component: degenerate box");
    const double cell = extent / resolution;

    RasterRegion r;
    r.cell_size = cell;
    r.origin = Complex(xlo - 2.0 * cell, ylo - 2.0 * cell);
    r.nx = static_cast<int>(std::ceil((xhi - xlo) / cell)) + 4;
    r.ny = static_cast<int>(std::ceil((yhi - ylo) / cell)) + 4;
    const std::size_t total = static_cast<std::size_t>(r.nx) * r.ny;

    std::vector<std::uint8_t> blocked(total, 0);
    for (const auto& chain : walls)
        for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
            Complex a = (chain[s] - r.origin) / cell;
            Complex b = (chain[s + 1] - r.origin) / cell;
            if (!clip_segment(a, b, -1.0, r.nx + 1.0, -1.0, r.ny + 1.0)) continue;
            mark_segment(blocked, r.nx, r.ny, a, b);
        }

    int zi = static_cast<int>(std::floor((z.real() - r.origin.real()) / cell));
    int zj = static_cast<int>(std::floor((z.imag() - r.origin.imag()) / cell));
    if (zi < 1 || zj < 1 || zi >= r.nx - 1 || zj >= r.ny - 1)
        throw std::domain_error("flood_fill_component: target outside the box");
    auto at = [&](std::vector<std::uint8_t>& v, int i, int j) -> std::uint8_t& {
        return v[static_cast<std::size_t>(j) * r.nx + i];
    };
    if (at(blocked, zi, zj)) {
        // The target's own cell is crossed by the curve: fall back to the
        // nearest free neighbor (half-cell perturbation of the seed).
        bool found = false;
        for (int dj = -1; dj <= 1 && !found; ++dj)
            for (int di = -1; di <= 1 && !found; ++di)
                if (!at(blocked, zi + di, zj + dj)) {
                    zi += di;
                    zj += dj;
                    found = true;
                }
        if (!found)
            throw std::domain_error("flood_fill_component: target cell buried in the boundary");
    }

    r.bitmap.assign(total, 0);
    std::deque<std::pair<int, int>> queue{{zi, zj}};
    at(r.bitmap, zi, zj) = 1;
    while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        if (i == 0 || j == 0 || i == r.nx - 1 || j == r.ny - 1)
            throw std::domain_error("flood_fill_component: fill leaked past the walls");
        constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& o : off) {
            const int ii = i + o[0], jj = j + o[1];
            if (!at(blocked, ii, jj) && !at(r.bitmap, ii, jj)) {
                at(r.bitmap, ii, jj) = 1;
                queue.emplace_back(ii, jj);
            }
        }
    }

    for (int j = 0; j < r.ny; ++j)
        for (int i = 0; i < r.nx; ++i) {
            if (!at(blocked, i, j)) continue;
            bool touches = false;
            for (int dj = -1; dj <= 1 && !touches; ++dj)
                for (int di = -1; di <= 1 && !touches; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii >= 0 && jj >= 0 && ii < r.nx && jj < r.ny && at(r.bitmap, ii, jj))
                        touches = true;
                }
            if (touches) r.boundary_cells.emplace_back(i, j);
        }
    return r;
}

RasterRegion open_region(const RasterRegion& region, int radius, Complex z) {
    if (region.empty()) throw std::invalid_argument("open_region: empty region");
    if (radius < 1) throw std::invalid_argument("open_region: radius < 1");
    RasterRegion r = region;
    const auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * r.nx + i; };

    for (int it = 0; it < radius; ++it) {
        std::vector<std::uint8_t> next(r.bitmap.size(), 0);
        for (int j = 0; j < r.ny; ++j)
            for (int i = 0; i < r.nx; ++i)
                if (r.filled(i, j) && r.filled(i - 1, j) && r.filled(i + 1, j) &&
                    r.filled(i, j - 1) && r.filled(i, j + 1))
                    next[idx(i, j)] = 1;
        r.bitmap.swap(next);
    }
    for (int it = 0; it < radius; ++it) {
        std::vector<std::uint8_t> next = r.bitmap;
        for (int j = 0; j < r.ny; ++j)
            for (int i = 0; i < r.nx; ++i) {
                if (!r.filled(i, j)) continue;
                if (i > 0) next[idx(i - 1, j)] = 1;
                if (i + 1 < r.nx) next[idx(i + 1, j)] = 1;
                if (j > 0) next[idx(i, j - 1)] = 1;
                if (j + 1 < r.ny) next[idx(i, j + 1)] = 1;
            }
        r.bitmap.swap(next);
        for (std::size_t q = 0; q < r.bitmap.size(); ++q)
            r.bitmap[q] = r.bitmap[q] & region.bitmap[q];
    }

    // Keep only the component containing z (erosion can split the region).
    int zi = static_cast<int>(std::floor((z.real() - r.origin.real()) / r.cell_size));
    int zj = static_cast<int>(std::floor((z.imag() - r.origin.imag()) / r.cell_size));
    if (!r.filled(zi, zj)) {
        bool found = false;
        for (int dj = -1; dj <= 1 && !found; ++dj)
            for (int di = -1; di <= 1 && !found; ++di)
                if (r.filled(zi + di, zj + dj)) {
                    zi += di;
                    zj += dj;
                    found = true;
                }
        if (!found) throw std::domain_error("open_region: nothing survives around the target");
    }
    std::vector<std::uint8_t> keep(r.bitmap.size(), 0);
    std::deque<std::pair<int, int>> queue{{zi, zj}};
    keep[idx(zi, zj)] = 1;
    while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& o : off) {
            const int ii = i + o[0], jj = j + o[1];
            if (r.filled(ii, jj) && !keep[idx(ii, jj)]) {
                keep[idx(ii, jj)] = 1;
                queue.emplace_back(ii, jj);
            }
        }
    }
    r.bitmap.swap(keep);

    r.boundary_cells.clear();
    for (int j = 0; j < r.ny; ++j)
        for (int i = 0; i < r.nx; ++i) {
            if (r.filled(i, j)) continue;
            bool touches = false;
            for (int dj = -1; dj <= 1 && !touches; ++dj)
                for (int di = -1; di <= 1 && !touches; ++di)
                    if (r.filled(i + di, j + dj)) touches = true;
            if (touches) r.boundary_cells.emplace_back(i, j);
        }
    return r;
}

RasterRegion enclosed_component(std::span<const Complex> polyline, Complex z, int resolution) {
    if (resolution < 16) throw std::invalid_argument("enclosed_component: resolution < 16");
    if (winding_number(polyline, z) == 0)
        throw std::domain_error("enclosed_component: point not enclosed by the polyline");

    double xlo = polyline[0].real(), xhi = xlo, ylo = polyline[0].imag(), yhi = ylo;
    for (const auto& p : polyline) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
        ylo = std::min(ylo, p.imag());
        yhi = std::max(yhi, p.imag());
    }
    std::vector<std::vector<Complex>> walls(1);
    walls[0].assign(polyline.begin(), polyline.end());
    walls[0].push_back(polyline.front());  // the fill sees the closed curve
    try {
        return flood_fill_component(walls, z, Complex(xlo, ylo), Complex(xhi, yhi), resolution);
    } catch (const std::domain_error& e) {
        throw std::domain_error(std::string("enclosed_component: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("enclosed_component: ") + e.what());
    }
}

namespace {

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Complex> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

double diameter(const RasterRegion& region) {
    const std::size_t cells = region.cell_count();
    if (region.empty() || cells == 0) throw std::invalid_argument("diameter: empty region");
    std::vector<Complex> pts;
    if (cells <= 2) {
        // Degenerate regions: measure the occupied cells themselves.
        double best = 0.0;
        Complex prev{};
        bool have = false;
        for (int j = 0; j < region.ny; ++j)
            for (int i = 0; i < region.nx; ++i)
                if (region.filled(i, j)) {
                    if (have) best = std::abs(region.center(i, j) - prev);
                    prev = region.center(i, j);
                    have = true;
                }
        return std::max(best, region.cell_size);
    }
    for (const auto& [i, j] : region.boundary_cells) pts.push_back(region.center(i, j));
    if (pts.empty())
        for (int j = 0; j < region.ny; ++j)
            for (int i = 0; i < region.nx; ++i)
                if (region.filled(i, j)) pts.push_back(region.center(i, j));
    const auto hull = convex_hull(std::move(pts));
    if (hull.size() == 1) return region.cell_size;
    double best = 0.0;
    if (hull.size() == 2) {
        best = std::abs(hull[1] - hull[0]);
    } else {
        // Rotating calipers over antipodal pairs.
        const std::size_t m = hull.size();
        std::size_t j = 1;
        for (std::size_t i = 0; i < m; ++i) {
            const Complex edge = hull[(i + 1) % m] - hull[i];
            while (std::abs(cross(hull[i], hull[(i + 1) % m], hull[(j + 1) % m])) >
                   std::abs(cross(hull[i], hull[(i + 1) % m], hull[j % m])))
                ++j;
            best = std::max({best, std::abs(hull[j % m] - hull[i]),
                             std::abs(hull[j % m] - hull[(i + 1) % m])});
            (void)edge;
        }
    }
    return best;
}

double area(const RasterRegion& region) {
    if (region.empty()) throw std::invalid_argument("area: empty region");
    return static_cast<double>(region.cell_count()) * region.cell_size * region.cell_size;
}

double distance_to_boundary(const RasterRegion& region, Complex z) {
    if (region.boundary_cells.empty())
        throw std::invalid_argument("distance_to_boundary: no boundary cells");
    double best = 1e300;
    for (const auto& [i, j] : region.boundary_cells)
        best = std::min(best, std::abs(region.center(i, j) - z));
    return best;
}

std::vector<Complex> boundary_contour(const RasterRegion& region) {
    // Moore-neighbor tracing of the region's outer contour, counterclockwise.
    int si = -1, sj = -1;
    for (int j = 0; j < region.ny && si < 0; ++j)
        for (int i = 0; i < region.nx; ++i)
            if (region.filled(i, j)) {
                si = i;
                sj = j;
                break;
            }
    if (si < 0) throw std::invalid_argument("boundary_contour: empty region");

    constexpr int nbr[8][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1},
                               {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    std::vector<Complex> out;
    int ci = si, cj = sj;
    int dir = 0;  // the row scan approaches from the west, as if we moved east
    const std::size_t cap = 8 * static_cast<std::size_t>(region.nx) * region.ny;
    for (std::size_t step = 0; step < cap; ++step) {
        out.push_back(region.center(ci, cj));
        int d = (dir + 6) % 8;  // start the scan just after the backtrack cell
        int found = -1;
        for (int s = 0; s < 8; ++s) {
            const int dd = (d + s) % 8;
            if (region.filled(ci + nbr[dd][0], cj + nbr[dd][1])) {
                found = dd;
                break;
            }
        }
        if (found < 0) break;  // isolated cell
        ci += nbr[found][0];
        cj += nbr[found][1];
        dir = found;
        if (ci == si && cj == sj && out.size() > 1) break;
    }
    return out;
}

}  // namespace cle
