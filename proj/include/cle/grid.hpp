#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cle {

// Uniform time grid t0 + k*dt, k = 0..n.  Times are always reconstructed
// multiplicatively so repeated addition cannot drift.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n = 0;

    TimeGrid() = default;
    TimeGrid(double t0_, double dt_, std::size_t n_) : t0(t0_), dt(dt_), n(n_) {
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
        if (n < 1) throw std::invalid_argument("TimeGrid: n must be >= 1");
    }

    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double horizon() const { return time(n); }
    std::size_t points() const { return n + 1; }

    // Largest k with time(k) <= t (clamped to [0, n]).
    std::size_t index_at(double t) const {
        if (t <= t0) return 0;
        auto k = static_cast<std::size_t>((t - t0) / dt);
        return k > n ? n : k;
    }
};

// Real-valued process sampled on a TimeGrid; values.size() == n+1.
struct ScalarPath {
    TimeGrid grid;
    std::vector<double> values;

    ScalarPath() = default;
    ScalarPath(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.points())
            throw std::invalid_argument("ScalarPath: length does not match grid");
    }

    double front() const { return values.front(); }
    double back() const { return values.back(); }
};

}  // namespace cle
