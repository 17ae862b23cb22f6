#pragma once

#include <array>
#include <span>

namespace hems {

using Point3 = std::array<double, 3>;

/// Volume dominated by `points` and bounded by `reference` (minimization).
/// Points not strictly better than the reference in every coordinate add
/// nothing. Slicing along the third objective with a 2-D staircase per
/// slice; O(n^2 log n), fine for fronts of a few hundred points.
double hypervolume3(std::span<const Point3> points, const Point3& reference);

}  // namespace hems
