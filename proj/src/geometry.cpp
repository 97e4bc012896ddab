#include "uavplace/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "uavplace/errors.hpp"
#include "uavplace/random.hpp"

namespace uavplace::geometry {

namespace {

bool inside(const Circle& c, const Point2& p) {
    // Slightly looser than kCoverTol so support points re-test as covered.
    return (p - c.center).norm() <= c.radius * (1.0 + 1e-12) + 1e-12;
}

Circle from_two(const Point2& a, const Point2& b) {
    Circle c;
    c.center = 0.5 * (a + b);
    c.radius = 0.5 * (a - b).norm();
    return c;
}

// Circle through three points. Collinear triples fall back to the diametral
// circle of the farthest pair, which is the smallest circle covering all three.
Circle from_three(const Point2& a, const Point2& b, const Point2& c) {
    const Point2 ab = b - a;
    const Point2 ac = c - a;
    const double det = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    const double scale = std::max({ab.squaredNorm(), ac.squaredNorm(), (b - c).squaredNorm()});
    if (std::abs(det) <= 1e-12 * std::max(scale, 1.0)) {
        Circle best = from_two(a, b);
        for (const Circle& cand : {from_two(a, c), from_two(b, c)}) {
            if (cand.radius > best.radius) best = cand;
        }
        return best;
    }
    Eigen::Matrix2d m;
    m << ab.x(), ab.y(), ac.x(), ac.y();
    const Eigen::Vector2d rhs(0.5 * ab.squaredNorm(), 0.5 * ac.squaredNorm());
    const Point2 rel = m.inverse() * rhs;
    Circle out;
    out.center = a + rel;
    out.radius = (out.center - a).norm();
    return out;
}

Circle with_two_on_boundary(const std::vector<Point2>& pts, std::size_t limit,
                            const Point2& q1, const Point2& q2) {
    Circle c = from_two(q1, q2);
    for (std::size_t i = 0; i < limit; ++i) {
        if (!inside(c, pts[i])) c = from_three(q1, q2, pts[i]);
    }
    return c;
}

Circle with_one_on_boundary(const std::vector<Point2>& pts, std::size_t limit, const Point2& q) {
    Circle c{q, 0.0};
    for (std::size_t i = 0; i < limit; ++i) {
        if (!inside(c, pts[i])) {
            c = (c.radius == 0.0) ? from_two(pts[i], q) : with_two_on_boundary(pts, i, pts[i], q);
        }
    }
    return c;
}

}  // namespace

Circle min_covering_circle(const std::vector<Point2>& points, std::uint64_t seed) {
    if (points.empty()) throw EmptyClusterError("min_covering_circle: empty point set");

    std::vector<Point2> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) { return a == b; }),
              pts.end());

    Rng rng(seed);
    rng.shuffle(pts);

    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!inside(c, pts[i])) c = with_one_on_boundary(pts, i, pts[i]);
    }
    return c;
}

Circle min_covering_circle(const PointList& points, std::uint64_t seed) {
    std::vector<Point2> pts(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) pts[static_cast<std::size_t>(i)] = points.row(i);
    return min_covering_circle(pts, seed);
}

bool discs_overlap(const Circle& a, const Circle& b) {
    return (a.center - b.center).norm() < a.radius + b.radius;
}

bool point_in_disc(const Point2& p, const Circle& c) {
    return (p - c.center).norm() <= c.radius + kCoverTol;
}

}  // namespace uavplace::geometry
