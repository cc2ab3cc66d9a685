#pragma once

#include <span>
#include <vector>

namespace imcf::quad {

// Cumulative composite Simpson. Even nodes use paired panels; each odd node adds the
// last interval under the quadratic through three neighbouring nodes. Result[0] = 0.

/// Cumulative integral on the uniform grid x_i = x0 + i*h.
std::vector<double> cumulative_simpson(std::span<const double> y, double h);

/// Cumulative integral on an arbitrary strictly increasing grid.
std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> y);

/// Total integral over the whole grid.
double simpson(std::span<const double> x, std::span<const double> y);

/// Cumulative product rule for I_i = int_0^{x_i} s^k y(s) ds on the uniform grid x_i = i*h.
/// The monomial weight is integrated exactly and y is interpolated piecewise quadratically,
/// so integrands vanishing like s^k near the origin keep their relative accuracy.
std::vector<double> cumulative_power_weighted(std::span<const double> y, double h, int k);

}  // namespace imcf::quad
