#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace chords::detail {

// Convex hull of 2D points: indices into pts, counterclockwise, strictly
// convex (collinear middle points dropped). Throws DegeneracyError when all
// points are collinear.
std::vector<int> hull2d(const Eigen::MatrixXd& pts);

// Convex hull of 3D points as outward-oriented triangles. Coplanar faces stay
// triangulated; callers merge them as needed. Throws DegeneracyError when all
// points are coplanar.
std::vector<std::array<int, 3>> hull3d(const Eigen::MatrixXd& pts);

}  // namespace chords::detail
