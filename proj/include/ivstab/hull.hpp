#pragma once

#include <span>
#include <vector>

#include "ivstab/poly.hpp"

namespace ivstab {

/// Convex hull of planar points (complex numbers), counter-clockwise, with
/// collinear points removed. One point for a degenerate set, two for a segment.
[[nodiscard]] std::vector<Complex> convex_hull(std::span<const Complex> pts);

/// Signed distance from z to a convex polygon returned by convex_hull:
/// positive outside (Euclidean distance), zero on the boundary, negative
/// inside (minus the distance to the nearest edge).
[[nodiscard]] double signed_distance(std::span<const Complex> hull, Complex z);

/// signed_distance(convex_hull(pts), 0) without keeping the hull. `scratch`
/// is reused between calls.
[[nodiscard]] double origin_distance(std::span<const Complex> pts, std::vector<Complex>& scratch);

}  // namespace ivstab
