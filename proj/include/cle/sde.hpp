#pragma once

#include <functional>
#include <optional>

#include "cle/grid.hpp"
#include "cle/rng.hpp"

namespace cle {

// Euler-Maruyama for dX = drift(t, X) dt + diffusion(t, X) dB.  If `floor`
// is given, a step landing below it is mirrored back to floor + |overshoot|
// (clamping would make the boundary sticky, which is the wrong behaviour for
// instantaneously reflecting processes).
ScalarPath integrate_euler_maruyama(const std::function<double(double, double)>& drift,
                                    const std::function<double(double, double)>& diffusion,
                                    double x0, const TimeGrid& grid, RngStream& rng,
                                    std::optional<double> floor = std::nullopt);

// Squared Bessel process dZ = 2 sqrt(Z) dB + delta dt, delta in (0,1),
// started from z0 >= 0.  Each step draws the exact transition law (a scaled
// noncentral chi-square), so the path is nonnegative by construction and
// E[Z_t] = z0 + delta*t holds without discretization bias; any negativity a
// step could produce would be reflected to its absolute value.
ScalarPath sample_squared_bessel(double delta, double z0, const TimeGrid& grid, RngStream& rng);

// Regularised principal value of int 1/X dt for a nonnegative path X.
// Above eps_reg the increment is exactly dt / X_k (left endpoint); below it
// the kernel is capped at 1/eps_reg.  eps_reg is a convergence knob: callers
// are expected to verify stability under halving it.
ScalarPath principal_value_integral(const ScalarPath& x, double eps_reg);

}  // namespace cle
