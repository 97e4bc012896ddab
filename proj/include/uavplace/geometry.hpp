#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace uavplace {

using Point2 = Eigen::Vector2d;                              // planar position (m)
using PointList = Eigen::Matrix<double, Eigen::Dynamic, 2>;  // one point per row

namespace geometry {

// Coverage tolerance for point-in-disc tests (m).
inline constexpr double kCoverTol = 1e-9;

struct Circle {
    Point2 center{0.0, 0.0};
    double radius = 0.0;  // m, >= 0
};

// Smallest circle enclosing all points (randomized incremental construction).
// The seed fixes the internal shuffle; the result is the unique minimum
// enclosing circle regardless of input order. Duplicates are tolerated.
// Throws EmptyClusterError on an empty set.
Circle min_covering_circle(const std::vector<Point2>& points, std::uint64_t seed = 0);
Circle min_covering_circle(const PointList& points, std::uint64_t seed = 0);

// Strict overlap: true iff the open discs intersect, so tangency is not overlap.
bool discs_overlap(const Circle& a, const Circle& b);

// Closed membership with kCoverTol slack so boundary points count as covered.
bool point_in_disc(const Point2& p, const Circle& c);

}  // namespace geometry
}  // namespace uavplace
