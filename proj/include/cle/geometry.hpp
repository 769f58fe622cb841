#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cle/conformal.hpp"

namespace cle {

// Occupancy raster of one connected planar region.  Cell (i,j) covers the
// square with lower-left corner origin + (i, j)*cell_size; centers are at
// origin + (i+1/2, j+1/2)*cell_size.
struct RasterRegion {
    Complex origin{};
    double cell_size = 0.0;
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> bitmap;              // nx*ny, row-major in j
    std::vector<std::pair<int, int>> boundary_cells;  // blocked cells touching the region

    bool filled(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny &&
               bitmap[static_cast<std::size_t>(j) * nx + i] != 0;
    }
    Complex center(int i, int j) const {
        return origin + cell_size * Complex(i + 0.5, j + 0.5);
    }
    std::size_t cell_count() const;
    bool empty() const { return bitmap.empty(); }
};

// Signed winding number of a closed polyline around z (counterclockwise
// positive).  Throws std::domain_error when z is within `tol` of the curve.
int winding_number(std::span<const Complex> polyline, Complex z, double tol = 1e-12);

// Number of transversal crossings between non-adjacent segments (O(n^2)).
std::size_t self_intersections(std::span<const Complex> polyline);

// Connected component of the complement of a set of open polyline walls
// containing z, rasterized over the box [box_lo, box_hi] at `resolution`
// cells per box extent.  No winding pre-check: the fill itself decides
// containment and throws std::domain_error when it reaches the box border.
// Wall segments outside the box are clipped away.
RasterRegion flood_fill_component(const std::vector<std::vector<Complex>>& walls, Complex z,
                                  Complex box_lo, Complex box_hi, int resolution);

// Connected component of the complement of the polyline containing z,
// rasterized at `resolution` cells per bounding-box diameter.  Throws
// std::invalid_argument for resolution < 16 and std::domain_error when z is
// not enclosed (winding 0) or the fill leaks out of the bounding box.
RasterRegion enclosed_component(std::span<const Complex> polyline, Complex z, int resolution);

// Morphological opening (erode then dilate by `radius` cells, 4-connected),
// restricted to the original occupancy and to the connected component
// containing z.  Removes channels narrower than ~2*radius cells -- deep
// raster fjords whose harmonic measure underflows double precision in the
// numerical Riemann map -- while staying inside the original region.
// Throws std::domain_error when nothing containing z survives.
RasterRegion open_region(const RasterRegion& region, int radius, Complex z);

// Max pairwise distance over boundary cell centers (convex hull + rotating
// calipers); the one-cell uncertainty from center offsets is not added in.
double diameter(const RasterRegion& region);

// Occupied-cell count times cell_size^2.
double area(const RasterRegion& region);

// Distance from z to the nearest boundary cell center.
double distance_to_boundary(const RasterRegion& region, Complex z);

// Closed polyline of boundary-cell centers obtained by Moore-neighbor
// tracing; used to hand a raster component to the Riemann mapper.
std::vector<Complex> boundary_contour(const RasterRegion& region);

}  // namespace cle
